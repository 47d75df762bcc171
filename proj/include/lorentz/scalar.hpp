#ifndef LORENTZ_SCALAR_HPP
#define LORENTZ_SCALAR_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace lorentz {

using Rational = mpq_class;

/// A real number held either as an exact rational or as a double.
///
/// Arithmetic between two exact operands stays exact; as soon as a double
/// participates the result is a double. This gives the two arithmetic modes
/// of the library without templating every algorithm: rational input data
/// flows through exactly, and anything touched by an irrational quantity
/// (a power-law weight, a p-th root) degrades to floating point.
class Scalar {
public:
  Scalar() : value_(Rational(0)) {}
  Scalar(int v) : value_(Rational(v)) {}
  Scalar(long v) : value_(Rational(v)) {}
  Scalar(long long v) : value_(Rational(static_cast<long>(v))) {}
  Scalar(unsigned long v) : value_(Rational(v)) {}
  Scalar(Rational v) : value_(std::move(v)) { std::get<Rational>(value_).canonicalize(); }

  static Scalar ratio(long num, long den);
  static Scalar from_double(double v) { return Scalar(FloatTag{}, v); }
  /// Exact rational with the same binary value as `v` (no rounding).
  static Scalar exact_from_double(double v);
  static Scalar infinity() { return from_double(std::numeric_limits<double>::infinity()); }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  bool is_infinite() const;
  bool is_zero() const;
  bool is_integer() const;
  int sign() const;

  const Rational &rational() const;
  double to_double() const;

  /// Drop exactness (used when an algorithm has to leave rational mode).
  Scalar as_float() const { return from_double(to_double()); }

  Scalar operator-() const;
  Scalar &operator+=(const Scalar &o);
  Scalar &operator-=(const Scalar &o);
  Scalar &operator*=(const Scalar &o);
  Scalar &operator/=(const Scalar &o);

  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }

  friend bool operator==(const Scalar &a, const Scalar &b);
  friend std::partial_ordering operator<=>(const Scalar &a, const Scalar &b);

  std::string to_string() const;

private:
  struct FloatTag {};
  Scalar(FloatTag, double v) : value_(v) {}

  std::variant<Rational, double> value_;
};

std::ostream &operator<<(std::ostream &os, const Scalar &s);

Scalar abs(const Scalar &s);
Scalar min(const Scalar &a, const Scalar &b);
Scalar max(const Scalar &a, const Scalar &b);

/// s^k for a nonnegative integer k; exact when s is exact.
Scalar pow_int(const Scalar &s, unsigned k);

/// s^p for real p > 0; exact when s is exact and p is a nonnegative integer.
Scalar power(const Scalar &s, double p);

/// The p-th root s^{1/p} of s >= 0. Exact when s is exact, p is a positive
/// integer and s is a perfect p-th power of a rational.
Scalar root(const Scalar &s, double p);

/// True when p is a (small) positive integer.
bool is_integral_exponent(double p);

/// Numeric value with a guaranteed error radius.
///
/// `error` bounds the truncation error of every infinite series that went
/// into `value`, plus a rounding allowance for floating-point evaluation.
/// An exact value has error zero and an exact `value`.
struct CertifiedValue {
  Scalar value;
  double error = 0.0;

  CertifiedValue() = default;
  CertifiedValue(Scalar v, double err = 0.0) : value(std::move(v)), error(err) {}
  CertifiedValue(int v) : value(v) {}

  static CertifiedValue infinity() { return {Scalar::infinity(), 0.0}; }

  bool exact() const { return error == 0.0 && value.is_exact(); }
  bool is_infinite() const { return value.is_infinite(); }
  double to_double() const { return value.to_double(); }
  double lower() const { return value.to_double() - error; }
  double upper() const { return value.to_double() + error; }

  /// True when `x` lies within the certified interval widened by `slack`.
  bool contains(double x, double slack = 0.0) const;
};

CertifiedValue operator+(const CertifiedValue &a, const CertifiedValue &b);
CertifiedValue operator-(const CertifiedValue &a, const CertifiedValue &b);
CertifiedValue operator*(const CertifiedValue &a, const CertifiedValue &b);
CertifiedValue operator/(const CertifiedValue &a, const CertifiedValue &b);
CertifiedValue abs(const CertifiedValue &a);

/// Raise a nonnegative certified value to the power p, propagating the radius.
CertifiedValue power(const CertifiedValue &a, double p);
/// p-th root of a nonnegative certified value, propagating the radius.
CertifiedValue root(const CertifiedValue &a, double p);

/// Rounding allowance for a floating value of magnitude |v| that went through
/// roughly `ops` floating operations.
double rounding_allowance(double v, double ops = 64.0);

} // namespace lorentz

#endif // LORENTZ_SCALAR_HPP
