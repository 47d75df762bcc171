#include "doctest.h"

#include <set>

#include "lorentz/rearrangement.hpp"
#include "lorentz/sampling.hpp"

using namespace lorentz;

namespace {

Sequence seq(std::initializer_list<long> head, TailClass tail = ZeroTail{}) {
  std::vector<Scalar> h;
  for (long v : head)
    h.emplace_back(v);
  return Sequence(std::move(h), std::move(tail));
}

// inf{lambda in grid : d_x(lambda) <= n - 1}, the grid holding every value
// the distribution function can jump at
Scalar inf_formula(const Sequence &x, std::size_t n) {
  std::set<Scalar> grid{Scalar(0)};
  for (const auto &v : x.head())
    grid.insert(abs(v));
  if (const auto *c = std::get_if<ConstantTail>(&x.tail()))
    grid.insert(c->c);
  if (const auto *g = std::get_if<GeometricTail>(&x.tail())) {
    Scalar term = g->a;
    for (std::size_t k = 0; k <= n + x.head_size(); ++k)
      grid.insert(term *= g->r);
  }
  for (const auto &lambda : grid) {
    ExtendedCount d = distribution(x, lambda);
    if (!d.infinite && d.value <= n - 1)
      return lambda;
  }
  FAIL("grid exhausted");
  return Scalar(0);
}

} // namespace

TEST_CASE("distribution counts") {
  CHECK(distribution(seq({3, 1, 2}), Scalar::ratio(3, 2)) == ExtendedCount::finite(2));
  CHECK(distribution(seq({0}), Scalar(0)) == ExtendedCount::finite(0));
  CHECK(distribution(seq({5}, ConstantTail{Scalar(1)}), Scalar::ratio(1, 2)) == ExtendedCount::unbounded());
  CHECK(distribution(Sequence({}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)}), Scalar::ratio(1, 5)) ==
        ExtendedCount::finite(2));
}

TEST_CASE("rearrangement") {
  CHECK(rearrangement(seq({-2, 3, 1})) == seq({3, 2, 1}));
  Sequence x({Scalar::ratio(1, 2), Scalar(4)}, ConstantTail{Scalar(1)});
  Sequence xs = rearrangement(x);
  CHECK(xs == seq({4}, ConstantTail{Scalar(1)}));
  CHECK(xs.head_size() == 1);
  // a 10^4-term truncation agrees with the inf-formula
  for (std::size_t n = 1; n <= 10000; n += 999)
    CHECK(xs.at(n) == inf_formula(x, n));

  Sequence g = seq({1}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  Sequence gs = rearrangement(g);
  CHECK(gs.at(1) == Scalar(1));
  CHECK(gs.at(2) == Scalar::ratio(1, 2));
  CHECK(gs.at(5) == Scalar::ratio(1, 16));

  Sequence merged = rearrangement(seq({0, 3}, GeometricTail{Scalar(8), Scalar::ratio(1, 2)}));
  CHECK(merged.at(1) == Scalar(4));
  CHECK(merged.at(2) == Scalar(3));
  CHECK(merged.at(3) == Scalar(2));
  CHECK(merged.at(4) == Scalar(1));

  // several tail terms land above the smallest head value
  Sequence deep({Scalar::ratio(25, 8), Scalar::ratio(7, 48)}, GeometricTail{Scalar::ratio(13, 16), Scalar::ratio(1, 2)});
  Sequence ds = rearrangement(deep);
  CHECK(ds.at(2) == Scalar::ratio(13, 32));
  CHECK(ds.at(3) == Scalar::ratio(13, 64));
  CHECK(ds.at(4) == Scalar::ratio(7, 48));
  CHECK(ds.at(5) == Scalar::ratio(13, 128));
  for (std::size_t n = 1; n <= 40; ++n)
    CHECK(ds.at(n) == inf_formula(deep, n));
}

TEST_CASE("rearrangement limit") {
  CHECK(rearrangement_limit(seq({7, 7})) == Scalar(0));
  CHECK(rearrangement_limit(seq({5}, ConstantTail{Scalar(1)})) == Scalar(1));
  CHECK(rearrangement_limit(seq({1}, GeometricTail{Scalar(2), Scalar::from_double(0.9)})) == Scalar(0));
}

TEST_CASE("maximal sequence") {
  CHECK(maximal_at(seq({3, 1}), 2).value == Scalar(2));
  CHECK(maximal_at(seq({3, 1}), 4).value == Scalar(1));
  CHECK(maximal_at(seq({1, 1}), 3).value == Scalar::ratio(2, 3));
  CHECK(maximal_at(seq({3}, ConstantTail{Scalar(3)}), 17).value == Scalar(3));
  CHECK(maximal_at(seq({1, 1}), 3).exact());
  // geometric partial sums are closed form: 1 + 1/2 + 1/4 = 7/4
  CHECK(maximal_at(seq({1}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)}), 3).value == Scalar::ratio(7, 12));
}

TEST_CASE("equimeasurability") {
  CHECK(equimeasurable(seq({-1, 2}), seq({2, 1})));
  CHECK_FALSE(equimeasurable(seq({1}), seq({1, 1})));
  CHECK(equimeasurable(seq({0}, ConstantTail{Scalar(1)}), seq({1}, ConstantTail{Scalar(1)})));
}

TEST_CASE("measure gap") {
  CHECK(measure_gap(seq({1, 1}), seq({1, 0}), Scalar::ratio(1, 2)) == ExtendedCount::finite(1));
  CHECK(measure_gap(seq({4, 2}), seq({4, 2}), Scalar::ratio(1, 2)) == ExtendedCount::finite(0));
  CHECK(measure_gap(seq({0}, ConstantTail{Scalar(1)}), seq({0}), Scalar::ratio(1, 2)) ==
        ExtendedCount::unbounded());
}

TEST_CASE("additivity and the sign/window condition") {
  CHECK(additivity_holds(seq({2, 0}), seq({1, 0}), 2));
  CHECK_FALSE(additivity_holds(seq({2, 0}), seq({0, 1}), 2));
  CHECK(additivity_holds(seq({0}), seq({3, -1, 2}), 3));
  CHECK_THROWS(additivity_holds(seq({1}, ConstantTail{Scalar(1)}), seq({1}), 3));

  CHECK(sign_window_condition(seq({2, 1}), seq({4, 2})));
  CHECK_FALSE(sign_window_condition(seq({1, 0}), seq({-1, 0})));
  CHECK_FALSE(sign_window_condition(seq({2, 0}), seq({0, 1})));
  // zero entries agree with either sign
  CHECK(additivity_holds(seq({1, 0}), seq({1, 1}), 2));
  CHECK(sign_window_condition(seq({1, 0}), seq({1, 1})));
  CHECK_THROWS(sign_window_condition(seq({1, 1, 1, 1}), seq({1}), WindowSets::unrestricted, 3));
}

TEST_CASE("rearrangement invariants on random data") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Sequence x = random_finite(rng, 8);
    Sequence y = random_finite(rng, 8);
    if (trial % 3 == 0)
      x = Sequence(x.head(), ConstantTail{abs(random_rational(rng, 4, 3))});
    Sequence xs = rearrangement(x);
    RearrangedSums sx(x);
    for (std::size_t n = 1; n <= 50; ++n) {
      CHECK(xs.at(n + 1) <= xs.at(n));
      CHECK(xs.at(n) == inf_formula(x, n));
      CHECK(sx.maximal(n) >= xs.at(n));
      CHECK(sx.maximal(n + 1) <= sx.maximal(n));
    }
    if (x.has_zero_tail()) {
      RearrangedSums ss(x + y), sy(y);
      for (std::size_t n = 1; n <= 20; ++n)
        CHECK(ss.maximal(n) <= sx.maximal(n) + sy.maximal(n));
    }
  }
}

TEST_CASE("permute_and_flip preserves the rearrangement") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Sequence x = random_finite(rng, 7);
    auto perm = random_permutation(rng, x.head_size());
    auto signs = random_signs(rng, x.head_size());
    CHECK(equimeasurable(x, permute_and_flip(x, perm, signs)));
  }
  CHECK_THROWS(permute_and_flip(seq({1, 2}), {0, 0}, {1, 1}));
}
