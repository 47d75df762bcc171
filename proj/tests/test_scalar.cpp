#include "doctest.h"

#include <cmath>

#include "lorentz/scalar.hpp"

using namespace lorentz;

TEST_CASE("exact arithmetic stays exact") {
  Scalar a = Scalar::ratio(1, 3), b = Scalar::ratio(1, 6);
  CHECK((a + b) == Scalar::ratio(1, 2));
  CHECK((a + b).is_exact());
  CHECK((a * Scalar(3)) == Scalar(1));
  CHECK(Scalar::ratio(2, 4) == Scalar::ratio(1, 2));
}

TEST_CASE("mixing in a double leaves exact mode") {
  Scalar s = Scalar::ratio(1, 2) + Scalar::from_double(0.25);
  CHECK_FALSE(s.is_exact());
  CHECK(s.to_double() == 0.75);
  CHECK(Scalar::from_double(0.5) == Scalar::ratio(1, 2));
}

TEST_CASE("exact_from_double keeps the binary value") {
  Scalar s = Scalar::exact_from_double(0.1);
  CHECK(s.is_exact());
  CHECK(s.to_double() == 0.1);
  CHECK(s != Scalar::ratio(1, 10));
}

TEST_CASE("roots of perfect powers are exact") {
  CHECK(root(Scalar::ratio(9, 4), 2.0) == Scalar::ratio(3, 2));
  CHECK(root(Scalar::ratio(9, 4), 2.0).is_exact());
  CHECK_FALSE(root(Scalar(2), 2.0).is_exact());
  CHECK(root(Scalar(2), 2.0).to_double() == doctest::Approx(std::sqrt(2.0)));
  CHECK(pow_int(Scalar::ratio(2, 3), 3) == Scalar::ratio(8, 27));
}

TEST_CASE("ordering and infinity") {
  CHECK(Scalar(1) < Scalar::ratio(3, 2));
  CHECK(Scalar::infinity() > Scalar(1000000));
  CHECK(Scalar::infinity().is_infinite());
  CHECK(abs(Scalar(-3)) == Scalar(3));
  CHECK(Scalar(-3).sign() == -1);
}

TEST_CASE("certified values propagate radii") {
  CertifiedValue a(Scalar::from_double(1.0), 1e-10);
  CertifiedValue b(Scalar(2));
  CertifiedValue s = a + b;
  CHECK(s.error >= 1e-10);
  CHECK(s.contains(3.0));
  CHECK((CertifiedValue(Scalar(1)) + CertifiedValue(Scalar::ratio(1, 2))).exact());
  CHECK((CertifiedValue::infinity() + b).is_infinite());
  CertifiedValue r = root(CertifiedValue(Scalar::from_double(4.0), 1e-8), 2.0);
  CHECK(r.contains(2.0));
  CHECK(r.error >= 2.4e-9);
}
