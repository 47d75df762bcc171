#include "doctest.h"

#include <cmath>

#include "lorentz/fixtures.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/rearrangement.hpp"
#include "lorentz/sampling.hpp"

using namespace lorentz;
using namespace lorentz::fixtures;

namespace {

Sequence seq(std::initializer_list<Scalar> head, TailClass tail = ZeroTail{}) {
  return Sequence(std::vector<Scalar>(head), std::move(tail));
}

Scalar inv(const CertifiedValue &v) {
  return v.exact() ? Scalar(1) / v.value : Scalar::from_double(1.0 / v.to_double());
}

bool on_sphere(const WeightSpec &w, const Sequence &x) {
  const CertifiedValue n = norm_gamma(w, x);
  return n.exact() ? n.value == Scalar(1) : std::fabs(n.to_double() - 1.0) <= 1e-9;
}

void check_pair(const WeightSpec &w, const Sequence &x, const std::pair<Sequence, Sequence> &pair) {
  const auto &[y, z] = pair;
  CHECK(on_sphere(w, y));
  CHECK(on_sphere(w, z));
  CHECK_FALSE(y == z);
  const Sequence mid = (y + z);
  for (std::size_t i = 1; i <= mid.head_size() + 1; ++i)
    CHECK(mid.at(i) == Scalar(2) * Scalar::exact_from_double(x.at(i).to_double()));
}

// w = (0 | i^{-1/2}): W(1) = 0 and W(infinity) = infinity.
WeightSpec zero_first() { return WeightSpec::power_law(1, 0.5, 1.0, {Scalar(0)}); }

} // namespace

TEST_CASE("extreme points of the gamma_{1,w} ball") {
  const WeightSpec w = wB();
  const Sequence e1 = seq({inv(phi(w, 1))});
  const Verdict v = classify_extreme_gamma1(w, e1);
  CHECK(v.result);
  CHECK(v.index == std::optional<std::size_t>(1));
  CHECK_FALSE(extreme_midpoint_oracle(w, e1, 6, 100000).has_value());

  // not flat: x* = (2c, c)
  const CertifiedValue n = norm_gamma(w, seq({2, 1}));
  const Scalar c = inv(n);
  const Sequence x = seq({c, Scalar(2) * c});
  const Verdict nf = classify_extreme_gamma1(w, x);
  CHECK_FALSE(nf.result);
  CHECK(nf.failed == "x* not flat");
  REQUIRE(nf.pair.has_value());
  check_pair(w, x, *nf.pair);
  CHECK(extreme_midpoint_oracle(w, x, 4, 100000).has_value());

  // flat on two coordinates with W(1) = 0
  const WeightSpec w0 = zero_first();
  const Scalar f2 = inv(phi(w0, 2));
  const Sequence flat = seq({f2, -f2});
  const Verdict sw = classify_extreme_gamma1(w0, flat);
  CHECK_FALSE(sw.result);
  CHECK(sw.failed == "W(n0-1)=0");
  REQUIRE(sw.pair.has_value());
  check_pair(w0, flat, *sw.pair);
  CHECK(extreme_midpoint_oracle(w0, flat, 4, 100000).has_value());

  CHECK_THROWS_AS(classify_extreme_gamma1(w, seq({Scalar::ratio(1, 100)})), SphereError);
  CHECK_THROWS_AS(extreme_midpoint_oracle(w, seq({Scalar::ratio(1, 100)}), 4, 10), SphereError);
  CHECK_THROWS_AS(classify_extreme_gamma1(wA(), seq({Scalar::ratio(1, 2)})), RegimeError);
}

TEST_CASE("exact decomposition pairs for rational weights") {
  // phi is rational here, so the pair is exact
  const WeightSpec w = wA();
  const Sequence x = seq({Scalar::ratio(1, 4), Scalar::ratio(1, 4), Scalar::ratio(1, 2)});
  REQUIRE(norm_gamma(w, x).value == Scalar(Scalar::ratio(11, 8)));
  const Sequence xn = x.scaled(Scalar::ratio(8, 11));
  const auto pair = plateau_decomposition(w, xn);
  CHECK(norm_gamma(w, pair.first).value == Scalar(1));
  CHECK(norm_gamma(w, pair.second).value == Scalar(1));
  CHECK(pair.first + pair.second == xn + xn);
}

TEST_CASE("enumerated extreme points") {
  const WeightSpec w = wB();
  CHECK(extreme_point_count(w, 1) == 2);
  CHECK(extreme_point_count(w, 2) == 8);
  CHECK(extreme_point_count(w, 4) == 80);
  CHECK(extreme_point_count(zero_first(), 3) == 6 + 8);
  CHECK_THROWS_AS(extreme_point_count(w, 13), std::invalid_argument);
  CHECK_THROWS_AS(extreme_point_count(wA(), 2), RegimeError);

  const auto pts = enumerate_extreme_points(w, 4);
  CHECK(pts.size() == 80);
  for (const auto &e : pts) {
    const Sequence x = e.sequence();
    CHECK(classify_extreme_gamma1(w, x).result);
    CHECK_FALSE(extreme_midpoint_oracle(w, x, 4, 2000).has_value());
  }
  for (const auto &e : enumerate_extreme_points(zero_first(), 3))
    CHECK(e.n0 != 2);
}

TEST_CASE("random sphere points: classifier against generated pairs") {
  const WeightSpec w = wB();
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    Sequence x = random_finite(rng, 4);
    if (x.is_zero())
      continue;
    x = x.scaled(inv(norm_gamma(w, x)));
    const Verdict v = classify_extreme_gamma1(w, x);
    if (v.result) {
      CHECK_FALSE(extreme_midpoint_oracle(w, x, 4, 5000).has_value());
    } else {
      REQUIRE(v.pair.has_value());
      check_pair(w, x, *v.pair);
    }
    const auto perm = random_permutation(rng, 4);
    const auto signs = random_signs(rng, 4);
    CHECK(classify_extreme_gamma1(w, permute_and_flip(x.materialized(4), perm, signs)).result == v.result);
  }
}

TEST_CASE("extreme points of the dual ball") {
  const WeightSpec w = wA();
  const Verdict v = classify_extreme_dual(w, seq({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}));
  CHECK(v.result);
  CHECK(classify_extreme_dual(w, seq({Scalar::ratio(1, 2), Scalar::ratio(5, 2)})).result);
  CHECK(classify_extreme_dual(w, seq({Scalar::ratio(-1, 2), 0, Scalar::ratio(5, 2)})).result);
  const Verdict no = classify_extreme_dual(w, seq({Scalar::ratio(5, 2)}));
  CHECK_FALSE(no.result);
  CHECK(no.index == std::optional<std::size_t>(2));
  CHECK_THROWS_AS(classify_extreme_dual(w, seq({1})), SphereError);

  const WeightSpec b = wB();
  const Sequence vb = seq({derived_v(b, 1).value, derived_v(b, 2).value});
  CHECK_FALSE(classify_extreme_dual(b, vb.scaled(inv(norm_m_psi(b, vb).value))).result);
}

TEST_CASE("smooth points of the gamma_{1,w} sphere") {
  const WeightSpec w = wA();
  const Sequence g = seq({1}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  REQUIRE(norm_gamma(w, g).value == Scalar(Scalar::ratio(11, 4)));
  const Verdict v = classify_smooth_gamma1(w, g.scaled(Scalar::ratio(4, 11)));
  CHECK(v.result);

  const Sequence pair = seq({Scalar::ratio(1, 2), Scalar::ratio(1, 4)});
  const Verdict fin = classify_smooth_gamma1(w, pair.scaled(inv(norm_gamma(w, pair))));
  CHECK_FALSE(fin.result);
  CHECK(fin.failed == "finite support");

  // x* = (1, 1, 1/2, 1/4, ...) has a tie at n = 1 where w(1) = 2 > 0
  const Sequence tie = seq({1, 1}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  const Verdict tv = classify_smooth_gamma1(w, tie.scaled(inv(norm_gamma(w, tie))));
  CHECK_FALSE(tv.result);
  CHECK(tv.index == std::optional<std::size_t>(1));

  // w = (0 | i^{-1/2}) ignores the tie at n = 1
  const WeightSpec w0 = zero_first();
  const CertifiedValue n0 = norm_gamma(w0, tie);
  CHECK(classify_smooth_gamma1(w0, tie.scaled(inv(n0))).result);

  // constant tails give ties at every large n
  const Sequence flat = seq({2}, ConstantTail{Scalar(1)});
  const Verdict cv = classify_smooth_gamma1(w, flat.scaled(inv(norm_gamma(w, flat))));
  CHECK_FALSE(cv.result);
  CHECK(cv.index == std::optional<std::size_t>(2));
}

TEST_CASE("smooth points of the predual and dual spheres") {
  const WeightSpec w = wB();
  const CertifiedValue f1 = phi(w, 1), f2 = phi(w, 2);
  const Sequence e1 = seq({f1.value});
  const Verdict one = classify_smooth_predual(w, e1);
  CHECK(one.result);
  CHECK(one.index == std::optional<std::size_t>(1));

  const Sequence two = seq({f1.value, Scalar::from_double(f2.to_double() - f1.to_double())});
  const Verdict tv = classify_smooth_predual(w, two);
  CHECK_FALSE(tv.result);
  CHECK(tv.failed == "multiple attaining indices");
  CHECK_THROWS_AS(classify_smooth_predual(wA(), seq({Scalar::ratio(5, 2)})), RegimeError);

  const Verdict d = classify_smooth_dual(w, e1);
  CHECK(d.result);
  REQUIRE(d.gap.has_value());
  CHECK(d.gap->to_double() == doctest::Approx(1.0 - f1.to_double() / f2.to_double()).epsilon(1e-12));
  CHECK_FALSE(classify_smooth_dual(w, two).result);
  CHECK_THROWS_AS(classify_smooth_dual(w, seq({1})), SphereError);
}

TEST_CASE("norming functional") {
  const WeightSpec w = wA();
  const Sequence y = norming_functional(w, seq({1, 1}));
  CHECK(y == seq({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}));
  CHECK(pairing(seq({1, 1}), y).value == Scalar(3));
  CHECK(norm_m_psi(w, y).value.value == Scalar(1));

  const Sequence y2 = norming_functional(w, seq({0, -1}));
  CHECK(y2 == seq({0, Scalar::ratio(-5, 2)}));
  CHECK(pairing(seq({0, -1}), y2).value == Scalar(Scalar::ratio(5, 2)));
  CHECK_THROWS_AS(norming_functional(w, Sequence()), std::invalid_argument);

  Rng rng(5);
  const WeightSpec wr{Scalar(3), Scalar::ratio(1, 2), Scalar(0), Scalar(2)};
  for (int t = 0; t < 1000; ++t) {
    const Sequence x = random_finite(rng, 6);
    if (x.is_zero())
      continue;
    for (auto ties : {TieBreak::lowest_index_first, TieBreak::highest_index_first}) {
      const Sequence f = norming_functional(wr, x, ties);
      CHECK(pairing(x, f).value == norm_gamma(wr, x).value);
      CHECK(norm_m_psi(wr, f).value.value == Scalar(1));
    }
  }
}

TEST_CASE("norming element") {
  const WeightSpec w = wA();
  const NormingElement a = norming_element(w, seq({1}));
  CHECK(a.index == 1);
  CHECK(a.x == seq({Scalar::ratio(2, 5)}));
  CHECK(pairing(a.x, seq({1})).value == Scalar(Scalar::ratio(2, 5)));
  CHECK(norm_gamma(w, a.x).value == Scalar(1));

  const NormingElement b = norming_element(w, seq({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}));
  CHECK(b.index == 1);
  CHECK(pairing(b.x, seq({Scalar::ratio(5, 2), Scalar::ratio(1, 2)})).value == Scalar(1));

  const WeightSpec wb = wB();
  const Sequence g({}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  double last = 0.0;
  for (std::size_t m : {1, 2, 4}) {
    const NormingElement e = norming_element(wb, g, m);
    CHECK(e.index == m);
    CHECK(std::fabs(norm_gamma(wb, e.x).to_double() - 1.0) <= 1e-12);
    CHECK(std::fabs(pairing(e.x, g).to_double() - e.quotient.to_double()) <= 1e-12);
    last = e.quotient.to_double();
  }
  CHECK(last <= norm_m_psi(wb, g).value.upper());
  CHECK_THROWS_AS(norming_element(w, Sequence()), std::invalid_argument);
}

TEST_CASE("counterexample bundles") {
  const auto sm = counterexample(CounterexampleKind::sm_failure, wA());
  CHECK(sm.verified);
  CHECK(norm_gamma(wA(), sm.sequences[0].second).value == Scalar(3));
  CHECK(counterexample(CounterexampleKind::oc_failure, wA()).verified);
  CHECK_THROWS_AS(counterexample(CounterexampleKind::oc_failure, wB()), RegimeError);
  CHECK_THROWS_AS(counterexample(CounterexampleKind::sm_failure, wB()), RegimeError);

  const auto p1 = counterexample(CounterexampleKind::sc_p1, wB());
  CHECK(p1.verified);
  CHECK_THROWS_AS(counterexample(CounterexampleKind::sc_p1, wB(2.0)), RegimeError);

  for (double p : {1.0, 2.0, 3.0}) {
    const auto winf = counterexample(CounterexampleKind::sc_winf, wA(p));
    CHECK(winf.verified);
  }

  const auto z1 = counterexample(CounterexampleKind::sc_zero_weight_n0_1, wC(2.0), Scalar::ratio(1, 2));
  CHECK(z1.verified);
  for (const auto &c : z1.checks)
    CHECK(c.exact);
  CHECK_THROWS_AS(counterexample(CounterexampleKind::sc_zero_weight_n0_1, wC(2.0), Scalar(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(counterexample(CounterexampleKind::sc_zero_weight_n0_1, wA()), RegimeError);

  const auto gt1 = counterexample(CounterexampleKind::sc_zero_weight_n0_gt1, WeightSpec{1, 0, 1});
  CHECK(gt1.verified);
  CHECK(gt1.sequences[0].second == seq({Scalar::ratio(3, 5), Scalar::ratio(3, 5)}));
  const auto a3 = counterexample(CounterexampleKind::sc_zero_weight_n0_gt1, wA(2.0));
  CHECK(a3.verified);
  CHECK(a3.sequences[0].second.head_size() == 3);
  CHECK_THROWS_AS(counterexample(CounterexampleKind::sc_zero_weight_n0_gt1, wB()), RegimeError);

  CHECK(counterexample_kind("SC_Winf") == CounterexampleKind::sc_winf);
  CHECK_THROWS(counterexample_kind("nope"));
}
