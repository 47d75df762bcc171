#ifndef LORENTZ_FIXTURES_HPP
#define LORENTZ_FIXTURES_HPP

#include <string>
#include <vector>

#include "lorentz/weights.hpp"

namespace lorentz::fixtures {

/// (2, 1 | Zero): W(infinity) = 3.
inline WeightSpec wA(double p = 1.0) { return WeightSpec({Scalar(2), Scalar(1)}, ZeroTail{}, p); }

/// w(i) = i^{-1/2}: W(infinity) = infinity.
inline WeightSpec wB(double p = 1.0) { return WeightSpec::power_law(Scalar(1), 0.5, p); }

/// (0, 1 | Zero): zero first weight.
inline WeightSpec wC(double p = 1.0) { return WeightSpec({Scalar(0), Scalar(1)}, ZeroTail{}, p); }

/// Named fixture lookup ("wA", "wB", "wC").
WeightSpec by_name(const std::string &name, double p = 1.0);

std::vector<std::string> names();

} // namespace lorentz::fixtures

#endif // LORENTZ_FIXTURES_HPP
