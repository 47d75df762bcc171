#include "doctest.h"

#include <cmath>

#include "lorentz/approx.hpp"
#include "lorentz/fixtures.hpp"
#include "lorentz/sampling.hpp"

using namespace lorentz;
using namespace lorentz::fixtures;

namespace {

Vector vec(std::initializer_list<Scalar> v) { return Vector(v); }

Vector random_vector(Rng &rng, std::size_t n) {
  Vector x(n);
  for (auto &e : x)
    e = random_rational(rng, 6, 4);
  return x;
}

} // namespace

TEST_CASE("metric projection examples") {
  const ProjectionResult r = metric_projection(wA(), vec({0, 1}), {vec({1, 0})});
  CHECK(std::fabs(r.coefficients[0]) <= 1e-9);
  CHECK(r.distance.to_double() == doctest::Approx(2.5).epsilon(1e-12));
  REQUIRE(r.oracle_gap.has_value());
  CHECK(std::fabs(*r.oracle_gap) <= 1e-9);

  const ProjectionResult in = metric_projection(wB(), vec({2, 2, 0}), {vec({1, 1, 0}), vec({0, 0, 1})});
  CHECK(in.coefficients[0] == doctest::Approx(2.0));
  CHECK(std::fabs(in.coefficients[1]) <= 1e-9);
  CHECK(in.distance.to_double() <= 1e-9);

  CHECK_THROWS_AS(metric_projection(wA(), vec({1, 2}), {vec({1, 1}), vec({2, 2})}), std::invalid_argument);
  CHECK_THROWS_AS(metric_projection(wA(2.0), vec({1, 2}), {vec({1, 1})}), std::domain_error);
  CHECK_THROWS_AS(metric_projection(wA(), Vector(33, Scalar(1)), {}), std::invalid_argument);
}

TEST_CASE("metric projection against the search oracle") {
  for (const auto &w : {wA(), wB(), wC()}) {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 10));
      const std::size_t dim = static_cast<std::size_t>(uniform_int(rng, 1, std::min<long>(3, static_cast<long>(n) - 1)));
      std::vector<Vector> basis;
      for (std::size_t j = 0; j < dim; ++j)
        basis.push_back(random_vector(rng, n));
      const Vector x = random_vector(rng, n);
      try {
        const ProjectionResult r = metric_projection(w, x, basis, 1e-9, static_cast<std::uint64_t>(t));
        CHECK(*r.oracle_gap <= 1e-6);
        CHECK(r.distance.to_double() <= norm_gamma(w, Sequence(x)).to_double() + 1e-12);
      } catch (const std::invalid_argument &) {
        // dependent random basis
      }
    }
  }
}

TEST_CASE("objective is midpoint convex and distances agree under the isometry") {
  const WeightSpec w = wB();
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_vector(rng, 5);
    const std::vector<Vector> basis{random_vector(rng, 5)};
    const ProjectionResult r = metric_projection(w, x, basis);
    Vector res(5);
    for (std::size_t i = 0; i < 5; ++i)
      res[i] = x[i] - Scalar::exact_from_double(r.coefficients[0]) * basis[0][i];
    const Sequence rs{std::vector<Scalar>(res)};
    CHECK(std::fabs(norm_gamma(w, rs).to_double() - norm_d1_derived(w, rs).to_double()) <= 1e-12);

    const double a = static_cast<double>(uniform_int(rng, -8, 8)), b = static_cast<double>(uniform_int(rng, -8, 8));
    auto f = [&](double c) {
      Vector z(5);
      for (std::size_t i = 0; i < 5; ++i)
        z[i] = x[i] - Scalar::exact_from_double(c) * basis[0][i];
      return norm_gamma(w, Sequence(z)).to_double();
    };
    CHECK(f(0.5 * (a + b)) <= 0.5 * (f(a) + f(b)) + 1e-12);
  }
}

TEST_CASE("operator norms over the extreme points") {
  const WeightSpec w = wB();
  CHECK(operator_norm_via_extremes(w, 4, identity_matrix(4)).value == Scalar(1));
  CHECK(operator_norm_via_extremes(w, 4, Matrix(4, Vector(4, Scalar(0)))).value == Scalar(0));
  const CertifiedValue c = operator_norm_via_extremes(w, 4, coordinate_projection(4, {1, 2}));
  CHECK(c.exact());
  CHECK(c.value == Scalar(1));

  Matrix twice = identity_matrix(3);
  for (auto &row : twice)
    for (auto &e : row)
      e = e * Scalar(2);
  CHECK(operator_norm_via_extremes(w, 3, twice).to_double() == doctest::Approx(2.0));

  // e1 -> e1 + e2, e1 + e2 -> e1 + 2 e2
  Matrix shear = identity_matrix(2);
  shear[1][0] = Scalar(1);
  const double v1 = derived_v(w, 1).to_double(), v2 = derived_v(w, 2).to_double();
  const double expected = std::max((v1 + v2) / v1, (2 * v1 + v2) / (v1 + v2));
  const CertifiedValue s = operator_norm_via_extremes(w, 2, shear);
  CHECK(s.to_double() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(s.lower() <= expected);
  CHECK(s.upper() >= expected);

  CHECK_THROWS_AS(operator_norm_via_extremes(wA(), 2, identity_matrix(2)), RegimeError);
  CHECK_THROWS_AS(operator_norm_via_extremes(w, 13, identity_matrix(13)), std::invalid_argument);
}

TEST_CASE("norm-one projections") {
  const WeightSpec w = wB();
  CHECK(is_norm_one_projection(w, 3, coordinate_projection(3, {1, 2}), {vec({1, 0, 0}), vec({0, 1, 0})}).result);
  CHECK(is_norm_one_projection(w, 3, identity_matrix(3),
                               {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})})
            .result);

  Matrix avg(2, Vector(2, Scalar(1)));
  const Verdict v = is_norm_one_projection(w, 2, avg, {vec({1, 1})});
  CHECK_FALSE(v.result);
  CHECK(v.failed == "P^2 != P");

  for (auto &row : avg)
    for (auto &e : row)
      e = Scalar::ratio(1, 2);
  CHECK(is_norm_one_projection(w, 2, avg, {vec({1, 1})}).result);

  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t k = 1; k < n; ++k) {
      std::vector<std::size_t> coords;
      for (std::size_t i = 1; i <= k; ++i)
        coords.push_back(i);
      const CertifiedValue c = operator_norm_via_extremes(w, n, coordinate_projection(n, coords));
      CHECK(c.exact());
      CHECK(c.value == Scalar(1));
    }
}

TEST_CASE("existence set probe") {
  const WeightSpec w = wB();
  const ExistenceReport r = existence_set_probe(w, 3, {vec({1, 0, 0})}, 5);
  CHECK(r.samples == 5);
  CHECK(r.attained == 5);
  CHECK(r.max_oracle_gap <= 1e-6);
  CHECK(r.certified_one);

  const ExistenceReport all = existence_set_probe(w, 2, {vec({1, 0}), vec({0, 1})}, 2);
  CHECK(all.certified_one);

  const ExistenceReport diag = existence_set_probe(w, 2, {vec({1, 1})}, 2);
  CHECK(diag.best_norm.to_double() >= 1.0 - 1e-12);
  CHECK(diag.certified_one);

  const ExistenceReport skew = existence_set_probe(w, 3, {vec({1, 2, 0})}, 1);
  CHECK(skew.best_norm.upper() >= 1.0);
}
