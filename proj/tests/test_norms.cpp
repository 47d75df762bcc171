#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "lorentz/fixtures.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/rearrangement.hpp"
#include "lorentz/sampling.hpp"

using namespace lorentz;
using namespace lorentz::fixtures;

namespace {

// 30-digit reference values (zeta, polylog) for x = (3, 1, 2) and
// x = (| Geometric(1, 1/2)) under w(i) = i^{-1/2}
constexpr double kGammaB1 = 12.3206987015196562978909832265;
constexpr double kGammaB2 = 4.39874955103947839881687190206;
constexpr double kMpsiB = 1.18350178700756326033119195096592; // attained at n = 2
constexpr double kMphiB1 = 10.9671453109263825356905610454;
constexpr double kMphiB2 = 3.84541043729702921993070670706;
constexpr double kGeoGammaB1 = 1.98753832786557448971474825498;
constexpr double kGeoGammaB2 = 0.702628258928179027850134388185;
constexpr double kGeoMpsiB = 0.191396691999713281124838002034147; // attained at n = 1

Sequence seq(std::initializer_list<long> head, TailClass tail = ZeroTail{}) {
  std::vector<Scalar> h;
  for (long v : head)
    h.emplace_back(v);
  return Sequence(std::move(h), std::move(tail));
}

Sequence halves() { return Sequence({}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)}); }

// Brute-force (sum x**(n)^p w(n)) for a finitely supported x and zero-tail w,
// with integral p, straight from the definitions.
Rational brute_gamma_power(const std::vector<Rational> &w, unsigned p, const std::vector<Scalar> &x) {
  std::vector<Rational> mags;
  for (const auto &v : x)
    mags.push_back(abs(v.rational()));
  std::sort(mags.begin(), mags.end(), [](const Rational &a, const Rational &b) { return a > b; });
  Rational total(0), partial(0);
  const std::size_t horizon = std::max(mags.size(), w.size());
  for (std::size_t n = 1; n <= horizon; ++n) {
    if (n <= mags.size())
      partial += mags[n - 1];
    Rational m = partial / Rational(static_cast<long>(n)), mp(1);
    for (unsigned j = 0; j < p; ++j)
      mp *= m;
    if (n <= w.size())
      total += mp * w[n - 1];
  }
  return total;
}

} // namespace

TEST_CASE("gamma norm examples") {
  CHECK(norm_gamma(wA(), seq({1, 1})).value == Scalar(3));
  CHECK(norm_gamma(wA(), seq({1, 1})).exact());
  CHECK(norm_gamma(wA(), Sequence::unit(1)).value == Scalar::ratio(5, 2));
  CHECK(norm_gamma(wA(), seq({0})).value == Scalar(0));
  // chi_N under a finite total weight has norm W(infinity)
  CHECK(norm_gamma(wA(), seq({}, ConstantTail{Scalar(1)})).value == Scalar(3));
  CHECK(norm_gamma(WeightSpec({Scalar(1), Scalar(2)}, GeometricWeightTail{Scalar(1), Scalar::ratio(1, 3)}, 1.0),
                   seq({}, ConstantTail{Scalar(1)}))
            .contains(3.5, 1e-12));
  CHECK(norm_gamma(wB(), seq({}, ConstantTail{Scalar(1)})).is_infinite());

  CHECK(norm_gamma(wB(), seq({3, 1, 2})).contains(kGammaB1, 1e-12));
  CHECK(norm_gamma(wB(2.0), seq({3, 1, 2})).contains(kGammaB2, 1e-12));
  CHECK(norm_gamma(wB(), halves()).contains(kGeoGammaB1, 1e-12));
  CHECK(norm_gamma(wB(), halves()).error < 1e-9);
  CHECK(norm_gamma(wB(2.0), halves()).contains(kGeoGammaB2, 1e-12));
}

TEST_CASE("gamma norm agrees with the brute-force definition") {
  Rng rng(3);
  const std::vector<Rational> wa{Rational(2), Rational(1)};
  const std::vector<Rational> wc{Rational(0), Rational(1)};
  for (int trial = 0; trial < 200; ++trial) {
    Sequence x = random_finite(rng, 7);
    CHECK(norm_gamma(wA(), x).value == Scalar(brute_gamma_power(wa, 1, x.head())));
    CHECK(norm_gamma(wC(), x).value == Scalar(brute_gamma_power(wc, 1, x.head())));
    CHECK(power(norm_gamma(wA(2.0), x), 2.0).contains(brute_gamma_power(wa, 2, x.head()).get_d(), 1e-12));
  }
}

TEST_CASE("d1 norms") {
  WeightSpec u({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}, ZeroTail{}, 1.0);
  CHECK(norm_d1(u, seq({1, 1})).value == Scalar(3));
  CHECK(norm_d1(u, seq({0})).value == Scalar(0));
  CHECK(norm_d1(WeightSpec({Scalar(1)}, ZeroTail{}, 1.0), seq({-4, 7})).value == Scalar(7));
  CHECK(norm_d1_derived(wA(), seq({1, 1})).value == Scalar(3));
  CHECK(norm_d1_derived(wB(), halves()).contains(kGeoGammaB1, 1e-12));
  CHECK(norm_d1_derived(wA(), seq({}, ConstantTail{Scalar(1)})).value == Scalar(3));
  CHECK(norm_d1(u, halves()).value == Scalar::ratio(5, 4) + Scalar::ratio(1, 8));
}

TEST_CASE("m_psi norm") {
  SupResult e1 = norm_m_psi(wA(), Sequence::unit(1));
  CHECK(e1.value.value == Scalar::ratio(2, 5));
  CHECK(e1.attained_at == std::size_t{1});

  SupResult plateau = norm_m_psi(wA(), Sequence({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}));
  CHECK(plateau.value.value == Scalar(1));
  CHECK(plateau.attaining == std::vector<std::size_t>{1, 2});
  CHECK(plateau.attained_on_tail);

  SupResult zero = norm_m_psi(wA(), seq({0}));
  CHECK(zero.value.value == Scalar(0));

  SupResult b = norm_m_psi(wB(), seq({3, 1, 2}));
  CHECK(b.value.contains(kMpsiB, 1e-12));
  CHECK(b.attained_at == std::size_t{2});
  CHECK(b.attaining.size() == 1);

  SupResult g = norm_m_psi(wB(), halves());
  CHECK(g.value.contains(kGeoMpsiB, 1e-12));
  CHECK(g.attained_at == std::size_t{1});

  // a geometric x under a finite weight: the ratio climbs to T / phi(infinity)
  SupResult lim = norm_m_psi(wA(), halves());
  CHECK(lim.value.value == Scalar::ratio(1, 3));
  CHECK_FALSE(lim.attained_at.has_value());

  CHECK_THROWS_AS(norm_m_psi(wA(), seq({}, ConstantTail{Scalar(1)})), std::domain_error);
  CHECK_THROWS_AS(norm_m_psi(wA(2.0), seq({1})), std::domain_error);
}

TEST_CASE("m_phi norm") {
  CHECK(norm_m_phi(wB(), seq({3, 1, 2})).value.contains(kMphiB1, 1e-12));
  CHECK(norm_m_phi(wB(2.0), seq({3, 1, 2})).value.contains(kMphiB2, 1e-12));
  CHECK(norm_m_phi(wA(), Sequence::unit(1)).value.value == Scalar::ratio(5, 2));
  CHECK(norm_m_phi(wA(), seq({1, 1})).value.value == Scalar(3));
  CHECK(norm_m_phi(wA(), seq({}, ConstantTail{Scalar(1)})).value.value == Scalar(3));
}

TEST_CASE("membership in m_psi0") {
  CHECK(in_m_psi0(wB(), seq({3, 1, 2})));
  CHECK(in_m_psi0(wB(), halves()));
  CHECK_FALSE(in_m_psi0(wA(), Sequence::unit(1)));
  CHECK(in_m_psi0(wA(), seq({0})));
  CHECK_FALSE(in_m_psi0(wB(), seq({}, ConstantTail{Scalar(1)})));
}

TEST_CASE("pairing and Hardy-Littlewood") {
  CHECK(pairing(seq({1, 1}), Sequence({Scalar::ratio(5, 2), Scalar::ratio(1, 2)})).value == Scalar(3));
  CHECK(pairing(seq({1, 1}), seq({0})).value == Scalar(0));
  CHECK(pairing(Sequence::unit(1), Sequence::unit(2)).value == Scalar(0));
  // sum 4^{-k} for k >= 1
  CHECK(pairing(halves(), halves()).value == Scalar::ratio(1, 3));
  CHECK(pairing(seq({}, ConstantTail{Scalar(2)}), halves()).value == Scalar(2));
  CHECK(pairing(seq({1, 0, 0}, ConstantTail{Scalar(2)}), halves()).value == Scalar::ratio(3, 4));
  CHECK_THROWS(pairing(seq({}, ConstantTail{Scalar(1)}), seq({}, ConstantTail{Scalar(1)})));

  CHECK(hardy_littlewood_gap(seq({1, 2}), seq({3, 1})).value == Scalar(2));
  CHECK(hardy_littlewood_gap(seq({3, 2}), seq({5, 1})).value == Scalar(0));
  CHECK(hardy_littlewood_gap(Sequence::unit(1), Sequence::unit(2)).value == Scalar(1));
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial)
    CHECK(hardy_littlewood_gap(random_finite(rng, 6), random_finite(rng, 6)).value.sign() >= 0);
}

TEST_CASE("isometry and embedding") {
  CHECK(isometry_residual(wA(), seq({1, 1})).value == Scalar(0));
  CHECK(isometry_residual(wA(), seq({0})).value == Scalar(0));
  CHECK(embedding_gap(wA(), Sequence::unit(1)).value == Scalar(0));
  CHECK(embedding_gap(wA(), seq({0})).value == Scalar(0));
  CHECK(embedding_gap(wA(), seq({1, 1})).value == Scalar(0));
  CHECK(std::fabs(embedding_gap(wB(), Sequence::unit(1)).to_double()) <= 1e-9);
  CHECK(isometry_residual(wB(), halves()).upper() <= 1e-9);
}

TEST_CASE("norm axioms and symmetry") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    Sequence x = random_finite(rng, 6), y = random_finite(rng, 6);
    Scalar lambda = random_rational(rng, 5, 3);
    for (const auto &w : {wA(), wC(), wB(), wB(2.0)}) {
      CertifiedValue nx = norm_gamma(w, x), ny = norm_gamma(w, y), nxy = norm_gamma(w, x + y);
      CHECK(nxy.lower() <= nx.upper() + ny.upper());
      CertifiedValue scaled = norm_gamma(w, x.scaled(lambda));
      CertifiedValue expect = CertifiedValue(abs(lambda)) * nx;
      if (scaled.exact() && expect.exact())
        CHECK(scaled.value == expect.value);
      else
        CHECK(scaled.contains(expect.to_double(), expect.error));
      auto perm = random_permutation(rng, x.head_size());
      auto signs = random_signs(rng, x.head_size());
      CertifiedValue moved = norm_gamma(w, permute_and_flip(x, perm, signs));
      CHECK(moved.value == nx.value);
    }
  }
}

TEST_CASE("Fatou: truncations increase to the norm") {
  for (const auto &w : {wA(), wB(), wB(2.0)}) {
    Sequence x = seq({2, 5}, GeometricTail{Scalar(3), Scalar::ratio(2, 3)});
    CertifiedValue full = norm_gamma(w, x);
    double last = 0.0;
    for (std::size_t m = 1; m <= 120; ++m) {
      std::vector<Scalar> head;
      for (std::size_t i = 1; i <= m; ++i)
        head.push_back(x.at(i));
      CertifiedValue nm = norm_gamma(w, Sequence(head));
      CHECK(nm.upper() >= last);
      CHECK(nm.lower() <= full.upper());
      last = nm.lower();
    }
    CHECK(full.upper() - last <= 1e-9);
  }
}
