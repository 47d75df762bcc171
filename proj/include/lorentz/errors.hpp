#ifndef LORENTZ_ERRORS_HPP
#define LORENTZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lorentz {

/// An operation was asked for outside the regime its characterization covers
/// (for example W(infinity) < infinity where the result assumes divergence).
class RegimeError : public std::domain_error {
public:
  explicit RegimeError(const std::string &what) : std::domain_error(what) {}
};

/// The input is not on the unit sphere of the relevant norm.
class SphereError : public std::invalid_argument {
public:
  explicit SphereError(const std::string &what) : std::invalid_argument(what) {}
};

} // namespace lorentz

#endif // LORENTZ_ERRORS_HPP
