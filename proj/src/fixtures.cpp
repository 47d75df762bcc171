#include "lorentz/fixtures.hpp"

#include <stdexcept>

namespace lorentz::fixtures {

WeightSpec by_name(const std::string &name, double p) {
  if (name == "wA")
    return wA(p);
  if (name == "wB")
    return wB(p);
  if (name == "wC")
    return wC(p);
  throw std::invalid_argument("unknown weight fixture: " + name);
}

std::vector<std::string> names() { return {"wA", "wB", "wC"}; }

} // namespace lorentz::fixtures
