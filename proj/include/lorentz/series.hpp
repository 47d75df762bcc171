#ifndef LORENTZ_SERIES_HPP
#define LORENTZ_SERIES_HPP

#include <cstddef>

#include "lorentz/scalar.hpp"

namespace lorentz::series {

/// sum_{i > n} i^{-s} for s > 1.
///
/// Sums explicitly up to an anchor index, then closes the tail with the
/// Euler-Maclaurin formula. t^{-s} is completely monotone, so the remainder
/// after the last Bernoulli term is bounded by the first omitted term; that
/// bound plus the integral-test remainder of the anchor choice is the
/// certified radius.
CertifiedValue power_tail(double s, std::size_t n);

/// sum_{i=lo}^{hi} i^{-s} (hi may be < lo, giving 0), evaluated directly.
CertifiedValue power_range(double s, std::size_t lo, std::size_t hi);

/// sum_{i > n} a r^{i - m} i^{-s} for i > max(n, m): a geometric weight
/// tail starting after index m, damped by i^{-s}. Exact closed form for s = 0.
CertifiedValue geometric_power_tail(const Scalar &a, const Scalar &r, std::size_t m,
                                    double s, std::size_t n);

/// i^{-s}, exact for integral s.
Scalar inverse_power(std::size_t i, double s);

} // namespace lorentz::series

#endif // LORENTZ_SERIES_HPP
