#include "doctest.h"

#include <cmath>

#include "lorentz/fixtures.hpp"
#include "lorentz/weights.hpp"

using namespace lorentz;
using namespace lorentz::fixtures;

namespace {

// reference values from an independent 30-digit evaluation of Hurwitz zeta
constexpr double kZeta32 = 2.61237534868548834334856756792;   // zeta(3/2)
constexpr double kZeta52m1 = 0.341487257250917179756769693349; // zeta(5/2) - 1
constexpr double kPhiB10 = 11.191386452691532788774943046;     // phi(10) for wB, p = 1
constexpr double kPhiB1000 = 125.030754533156475835140100439;  // phi(1000) for wB, p = 1
constexpr double kVB3 = 1.25882195809221455697991210324;       // sum_{k>=3} k^{-3/2}

} // namespace

TEST_CASE("W and W_p for the two-point weight") {
  WeightSpec w = wA();
  CHECK(W(w, 1).value == Scalar(2));
  CHECK(W(w, 2).value == Scalar(3));
  CHECK(W(w, 5).value == Scalar(3));
  CHECK(W(w, 5).exact());
  CHECK(Wp(w, 1).value == Scalar::ratio(1, 2));
  CHECK(Wp(w, 2).value == Scalar(0));
  CHECK(Wp(w, 7).exact());
  CHECK(phi(w, 1).value == Scalar::ratio(5, 2));
  CHECK(phi(w, 2).value == Scalar(3));
  CHECK(phi(w, 40).value == Scalar(3));
  CHECK(psi(w, 1).value == Scalar::ratio(2, 5));
  CHECK(psi(w, 2).value == Scalar::ratio(2, 3));
  CHECK(psi(w, 9).value == Scalar(3));
  CHECK(psi(w, 9).exact());
}

TEST_CASE("power-law weight") {
  WeightSpec w = wB();
  CertifiedValue w4 = W(w, 4);
  CHECK(w4.contains(1 + 1 / std::sqrt(2.0) + 1 / std::sqrt(3.0) + 0.5, 1e-15));
  CHECK(Wp(w, 1).contains(kZeta32 - 1, 1e-12));
  CHECK(Wp(w, 1).error <= 1e-9);
  CHECK(phi(w, 1).contains(kZeta32, 1e-12));
  CHECK(phi(w, 10).contains(kPhiB10, 1e-12));
  CHECK(phi(w, 1000).contains(kPhiB1000, 1e-10));
  CHECK(psi(w, 1).contains(1 / kZeta32, 1e-12));
  CHECK(derived_v(w, 3).contains(kVB3, 1e-12));
  CHECK(phi(wB(2.0), 1).contains(std::sqrt(1 + kZeta52m1), 1e-12));
}

TEST_CASE("W at infinity") {
  CHECK_FALSE(W_inf_class(wA()).infinite);
  CHECK(W_inf_class(wA()).value.value == Scalar(3));
  CHECK(W_inf_class(wB()).infinite);
  WInfinity f = W_inf_class(WeightSpec::power_law(Scalar(1), 2.0, 1.0));
  CHECK_FALSE(f.infinite);
  CHECK(f.value.contains(M_PI * M_PI / 6, 1e-12));
  WeightSpec g({Scalar(1)}, GeometricWeightTail{Scalar(1), Scalar::ratio(1, 2)}, 1.0);
  CHECK(W_inf_class(g).value.value == Scalar(2));
}

TEST_CASE("construction rejects bad specs") {
  CHECK_THROWS(WeightSpec({Scalar(0)}, ZeroTail{}, 1.0));
  CHECK_THROWS(WeightSpec({Scalar(-1), Scalar(2)}, ZeroTail{}, 1.0));
  CHECK_THROWS(WeightSpec::power_law(Scalar(1), 0.0, 1.0));
  CHECK_NOTHROW(WeightSpec::power_law(Scalar(1), 0.0, 2.0));
  CHECK_THROWS(WeightSpec({Scalar(1)}, ZeroTail{}, 0.0));
  CHECK_THROWS(WeightSpec({Scalar(1)}, GeometricWeightTail{Scalar(1), Scalar(1)}, 1.0));
}

TEST_CASE("derived weight") {
  WeightSpec w = wA();
  CHECK(derived_v(w, 1).value == Scalar::ratio(5, 2));
  CHECK(derived_v(w, 2).value == Scalar::ratio(1, 2));
  CHECK(derived_v(w, 3).value == Scalar(0));
  CHECK(derived_v_sequence(w) == Sequence({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}));
  CHECK_THROWS(derived_v(wA(2.0), 1));
}

TEST_CASE("phi is the partial sum of v") {
  for (const auto &w : {wA(), wC()}) {
    auto v = derived_v_table(w, 100);
    FundamentalTable table(w, 100);
    Scalar partial(0);
    for (std::size_t n = 1; n <= 100; ++n) {
      partial += v[n - 1].value;
      CHECK(table(n).exact());
      CHECK(table(n).value == partial);
    }
  }
  WeightSpec w = wB();
  auto v = derived_v_table(w, 100);
  FundamentalTable table(w, 100);
  CertifiedValue partial(0);
  for (std::size_t n = 1; n <= 100; ++n) {
    partial = partial + v[n - 1];
    CHECK(std::fabs(partial.to_double() - table(n).to_double()) <= 1e-9);
    CHECK(table(n).contains(phi(w, n).to_double(), 1e-12));
  }
}

TEST_CASE("phi and psi shape when W is infinite") {
  WeightSpec w = wB();
  FundamentalTable table(w, 1000);
  for (std::size_t n = 1; n < 1000; ++n) {
    CHECK(table(n).to_double() > 0);
    CHECK(table(n + 1).lower() > table(n).upper());
    double psi_n = n / table(n).to_double(), psi_next = (n + 1) / table(n + 1).to_double();
    CHECK(psi_next >= psi_n);
    CHECK(psi_next / (n + 1) <= psi_n / n);
  }
}

TEST_CASE("phi between W(n) and W(infinity)") {
  for (const auto &w : {wA(), wC(), WeightSpec({Scalar(1), Scalar(0), Scalar(3)}, ZeroTail{}, 1.0)}) {
    Scalar total = W_inf_class(w).value.value;
    auto v = derived_v_table(w, 20);
    for (std::size_t n = 1; n <= 20; ++n) {
      CHECK(W(w, n).value <= phi(w, n).value);
      CHECK(phi(w, n).value <= total);
      if (n > 1)
        CHECK(v[n - 1].value <= v[n - 2].value);
    }
  }
}

TEST_CASE("regime report") {
  RegimeReport a = regime(wA());
  CHECK_FALSE(a.W_infinite);
  CHECK_FALSE(a.order_continuous);
  CHECK_FALSE(a.strictly_monotone);
  CHECK_FALSE(a.strictly_convex);
  CHECK(a.fatou);
  CHECK_FALSE(a.dual_is_m_psi);
  CHECK_FALSE(a.predual_is_m_psi0);

  RegimeReport b = regime(wB());
  CHECK(b.W_infinite);
  CHECK(b.order_continuous);
  CHECK(b.strictly_monotone);
  CHECK(b.dual_is_m_psi);
  CHECK(b.predual_is_m_psi0);
  CHECK_FALSE(b.strictly_convex);
  CHECK(regime(wB(2.0)).strictly_convex);
  CHECK_FALSE(regime(WeightSpec::power_law(Scalar(1), 0.5, 2.0, {Scalar(0)})).strictly_convex);
}
