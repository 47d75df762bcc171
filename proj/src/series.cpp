#include "lorentz/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lorentz::series {

namespace {

constexpr std::size_t kAnchor = 64;

// B_{2k} / (2k)! for k = 1..5
constexpr std::array<double, 5> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
};

// s (s+1) ... (s+j-1)
double rising(double s, int j) {
  double out = 1.0;
  for (int i = 0; i < j; ++i)
    out *= s + i;
  return out;
}

} // namespace

Scalar inverse_power(std::size_t i, double s) {
  if (s == 0.0)
    return Scalar(1);
  if (is_integral_exponent(s))
    return Scalar(1) / pow_int(Scalar(i), static_cast<unsigned>(s));
  return Scalar::from_double(std::pow(static_cast<double>(i), -s));
}

CertifiedValue power_range(double s, std::size_t lo, std::size_t hi) {
  lo = std::max<std::size_t>(lo, 1);
  if (hi < lo)
    return CertifiedValue(Scalar(0));
  double sum = 0.0;
  // smallest terms first
  for (std::size_t i = hi; i >= lo; --i)
    sum += std::pow(static_cast<double>(i), -s);
  return {Scalar::from_double(sum), rounding_allowance(sum, 8.0 + static_cast<double>(hi - lo))};
}

CertifiedValue power_tail(double s, std::size_t n) {
  if (!(s > 1.0))
    throw std::domain_error("power_tail: series diverges for s <= 1");
  const std::size_t anchor = std::max<std::size_t>(n + 1, kAnchor);
  CertifiedValue head = power_range(s, n + 1, anchor - 1);

  const double a = static_cast<double>(anchor);
  double tail = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  for (int k = 1; k <= 4; ++k)
    tail += kBernoulliOverFactorial[static_cast<std::size_t>(k - 1)] * rising(s, 2 * k - 1) *
            std::pow(a, -s - 2 * k + 1);
  double remainder = std::fabs(kBernoulliOverFactorial[4] * rising(s, 9) * std::pow(a, -s - 9));

  double value = head.to_double() + tail;
  return {Scalar::from_double(value), head.error + remainder + rounding_allowance(value, 32.0)};
}

CertifiedValue geometric_power_tail(const Scalar &a, const Scalar &r, std::size_t m, double s,
                                    std::size_t n) {
  const std::size_t start = std::max(n, m) + 1;
  const Scalar one(1);
  if (s == 0.0)
    return CertifiedValue(a * pow_int(r, static_cast<unsigned>(start - m)) / (one - r));

  const double rd = r.to_double();
  double term_base = a.to_double() * std::pow(rd, static_cast<double>(start - m));
  double sum = 0.0;
  double remainder = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < start + 100000; ++i) {
    sum += term_base * std::pow(static_cast<double>(i), -s);
    term_base *= rd;
    remainder = term_base * std::pow(static_cast<double>(i + 1), -s) / (1.0 - rd);
    if (remainder <= 1e-18 * sum || remainder < 1e-300)
      break;
  }
  return {Scalar::from_double(sum), remainder + rounding_allowance(sum, 64.0)};
}

} // namespace lorentz::series
