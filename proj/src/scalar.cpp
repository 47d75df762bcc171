#include "lorentz/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lorentz {

Scalar Scalar::ratio(long num, long den) {
  if (den == 0)
    throw std::domain_error("Scalar::ratio: zero denominator");
  return Scalar(Rational(num, den));
}

Scalar Scalar::exact_from_double(double v) {
  if (!std::isfinite(v))
    throw std::domain_error("Scalar::exact_from_double: non-finite value");
  return Scalar(Rational(v));
}

bool Scalar::is_infinite() const {
  if (is_exact())
    return false;
  return std::isinf(std::get<double>(value_));
}

bool Scalar::is_zero() const {
  if (is_exact())
    return sgn(std::get<Rational>(value_)) == 0;
  return std::get<double>(value_) == 0.0;
}

bool Scalar::is_integer() const {
  if (is_exact())
    return std::get<Rational>(value_).get_den() == 1;
  double v = std::get<double>(value_);
  return std::isfinite(v) && std::floor(v) == v;
}

int Scalar::sign() const {
  if (is_exact())
    return sgn(std::get<Rational>(value_));
  double v = std::get<double>(value_);
  return (v > 0) - (v < 0);
}

const Rational &Scalar::rational() const {
  if (!is_exact())
    throw std::logic_error("Scalar::rational: value is not exact");
  return std::get<Rational>(value_);
}

double Scalar::to_double() const {
  if (is_exact())
    return std::get<Rational>(value_).get_d();
  return std::get<double>(value_);
}

Scalar Scalar::operator-() const {
  if (is_exact())
    return Scalar(Rational(-std::get<Rational>(value_)));
  return from_double(-std::get<double>(value_));
}

Scalar &Scalar::operator+=(const Scalar &o) {
  if (is_exact() && o.is_exact())
    std::get<Rational>(value_) += std::get<Rational>(o.value_);
  else
    value_ = to_double() + o.to_double();
  return *this;
}

Scalar &Scalar::operator-=(const Scalar &o) {
  if (is_exact() && o.is_exact())
    std::get<Rational>(value_) -= std::get<Rational>(o.value_);
  else
    value_ = to_double() - o.to_double();
  return *this;
}

Scalar &Scalar::operator*=(const Scalar &o) {
  if (is_exact() && o.is_exact())
    std::get<Rational>(value_) *= std::get<Rational>(o.value_);
  else
    value_ = to_double() * o.to_double();
  return *this;
}

Scalar &Scalar::operator/=(const Scalar &o) {
  if (is_exact() && o.is_exact()) {
    if (o.is_zero())
      throw std::domain_error("Scalar: division by exact zero");
    std::get<Rational>(value_) /= std::get<Rational>(o.value_);
  } else {
    value_ = to_double() / o.to_double();
  }
  return *this;
}

bool operator==(const Scalar &a, const Scalar &b) {
  if (a.is_exact() && b.is_exact())
    return std::get<Rational>(a.value_) == std::get<Rational>(b.value_);
  return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Scalar &a, const Scalar &b) {
  if (a.is_exact() && b.is_exact()) {
    int c = cmp(std::get<Rational>(a.value_), std::get<Rational>(b.value_));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.to_double() <=> b.to_double();
}

std::string Scalar::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream &operator<<(std::ostream &os, const Scalar &s) {
  if (s.is_exact())
    return os << s.rational().get_str();
  return os << s.to_double();
}

Scalar abs(const Scalar &s) { return s.sign() < 0 ? -s : s; }
Scalar min(const Scalar &a, const Scalar &b) { return b < a ? b : a; }
Scalar max(const Scalar &a, const Scalar &b) { return a < b ? b : a; }

Scalar pow_int(const Scalar &s, unsigned k) {
  if (!s.is_exact())
    return Scalar::from_double(std::pow(s.to_double(), static_cast<double>(k)));
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), s.rational().get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), s.rational().get_den_mpz_t(), k);
  return Scalar(Rational(num, den));
}

bool is_integral_exponent(double p) {
  return p >= 1.0 && p <= 64.0 && std::floor(p) == p;
}

Scalar power(const Scalar &s, double p) {
  if (is_integral_exponent(p))
    return pow_int(s, static_cast<unsigned>(p));
  if (p == 0.0)
    return Scalar(1);
  return Scalar::from_double(std::pow(s.to_double(), p));
}

Scalar root(const Scalar &s, double p) {
  if (s.sign() < 0)
    throw std::domain_error("root: negative radicand");
  if (p == 1.0)
    return s;
  if (s.is_exact() && is_integral_exponent(p)) {
    auto k = static_cast<unsigned long>(p);
    mpz_class rn, rd;
    int exact_num = mpz_root(rn.get_mpz_t(), s.rational().get_num_mpz_t(), k);
    int exact_den = mpz_root(rd.get_mpz_t(), s.rational().get_den_mpz_t(), k);
    if (exact_num != 0 && exact_den != 0)
      return Scalar(Rational(rn, rd));
  }
  return Scalar::from_double(std::pow(s.to_double(), 1.0 / p));
}

double rounding_allowance(double v, double ops) {
  if (!std::isfinite(v))
    return 0.0;
  return ops * std::numeric_limits<double>::epsilon() * std::fabs(v);
}

namespace {

double settle(const Scalar &v, double err, double ops) {
  if (v.is_exact())
    return err;
  return err + rounding_allowance(v.to_double(), ops);
}

} // namespace

bool CertifiedValue::contains(double x, double slack) const {
  if (is_infinite())
    return std::isinf(x) && x > 0;
  return std::fabs(value.to_double() - x) <= error + slack;
}

CertifiedValue operator+(const CertifiedValue &a, const CertifiedValue &b) {
  if (a.is_infinite() || b.is_infinite())
    return CertifiedValue::infinity();
  Scalar v = a.value + b.value;
  return {v, settle(v, a.error + b.error, 4)};
}

CertifiedValue operator-(const CertifiedValue &a, const CertifiedValue &b) {
  if (b.is_infinite())
    throw std::domain_error("CertifiedValue: subtracting infinity");
  if (a.is_infinite())
    return a;
  Scalar v = a.value - b.value;
  // cancellation: the rounding allowance scales with the operands, not the result
  double ops = std::max(std::fabs(a.to_double()), std::fabs(b.to_double()));
  double err = a.error + b.error;
  if (!v.is_exact())
    err += rounding_allowance(ops, 8);
  return {v, err};
}

CertifiedValue operator*(const CertifiedValue &a, const CertifiedValue &b) {
  if (a.is_infinite() || b.is_infinite()) {
    if (a.value.is_zero() || b.value.is_zero())
      return CertifiedValue(0);
    return CertifiedValue::infinity();
  }
  Scalar v = a.value * b.value;
  double av = std::fabs(a.to_double()), bv = std::fabs(b.to_double());
  double err = av * b.error + bv * a.error + a.error * b.error;
  return {v, settle(v, err, 4)};
}

CertifiedValue operator/(const CertifiedValue &a, const CertifiedValue &b) {
  if (a.is_infinite())
    return a;
  if (b.is_infinite())
    return CertifiedValue(0);
  Scalar v = a.value / b.value;
  double bv = std::fabs(b.to_double());
  double err = 0.0;
  if (a.error != 0.0 || b.error != 0.0) {
    if (bv <= b.error)
      err = std::numeric_limits<double>::infinity();
    else
      err = (a.error + std::fabs(v.to_double()) * b.error) / (bv - b.error);
  }
  return {v, settle(v, err, 4)};
}

CertifiedValue abs(const CertifiedValue &a) { return {abs(a.value), a.error}; }

CertifiedValue power(const CertifiedValue &a, double p) {
  if (a.is_infinite())
    return a;
  Scalar v = power(a.value, p);
  double err = 0.0;
  if (a.error != 0.0) {
    double c = a.to_double();
    double hi = std::pow(c + a.error, p) - std::pow(c, p);
    double lo = std::pow(c, p) - std::pow(std::max(c - a.error, 0.0), p);
    err = std::max(hi, lo);
  }
  return {v, settle(v, err, 16)};
}

CertifiedValue root(const CertifiedValue &a, double p) {
  if (a.is_infinite() || p == 1.0)
    return a;
  Scalar v = root(a.value, p);
  double err = 0.0;
  if (a.error != 0.0) {
    double c = std::max(a.to_double(), 0.0);
    double hi = std::pow(c + a.error, 1.0 / p) - std::pow(c, 1.0 / p);
    double lo = std::pow(c, 1.0 / p) - std::pow(std::max(c - a.error, 0.0), 1.0 / p);
    err = std::max(hi, lo);
  }
  return {v, settle(v, err, 16)};
}

} // namespace lorentz
