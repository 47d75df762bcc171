#include "lorentz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "lorentz/approx.hpp"
#include "lorentz/fixtures.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/rearrangement.hpp"
#include "lorentz/sampling.hpp"

namespace lorentz {

namespace {

using fixtures::wA;
using fixtures::wB;
using fixtures::wC;

Scalar reciprocal(const CertifiedValue &v) {
  return v.exact() ? Scalar(1) / v.value : Scalar::from_double(1.0 / v.to_double());
}

Sequence normalized(const WeightSpec &w, const Sequence &x) { return x.scaled(reciprocal(norm_gamma(w, x))); }

Sequence nonzero_finite(Rng &rng, std::size_t max_len) {
  for (;;) {
    Sequence x = random_finite(rng, max_len);
    if (!x.is_zero())
      return x;
  }
}

bool positively_proportional(const Sequence &a, const Sequence &b) {
  const std::size_t n = std::max(a.head_size(), b.head_size());
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (a.at(i) * b.at(j) != a.at(j) * b.at(i))
        return false;
  return pairing(a, b).value.sign() > 0;
}

// The sequence x chi_{[1, m]}.
Sequence head_part(const Sequence &x, std::size_t m) {
  std::vector<Scalar> head = x.materialized(std::max(m, x.head_size())).head();
  head.resize(m, Scalar(0));
  return Sequence(std::move(head));
}

// The sequence x - x chi_{[1, m]}.
Sequence tail_after(const Sequence &x, std::size_t m) {
  Sequence xm = x.materialized(m);
  std::vector<Scalar> head = xm.head();
  for (std::size_t i = 0; i < m && i < head.size(); ++i)
    head[i] = Scalar(0);
  return Sequence(std::move(head), xm.tail());
}

// Folds a sub-report into a parent under `key`.
void merge(CheckReport &into, const std::string &key, const CheckReport &part) {
  into.pass = into.pass && part.pass;
  into.details[key] = part.details;
  into.details[key]["pass"] = part.pass;
}

std::vector<WeightSpec> regime_catalogue() {
  return {wA(),
          wB(),
          wC(),
          wA(2.0),
          wB(2.0),
          WeightSpec::power_law(1, 2.0, 1.0),
          WeightSpec::power_law(1, 1.0, 1.0, {Scalar(0), Scalar(3)}),
          WeightSpec({Scalar(1)}, GeometricWeightTail{Scalar(1), Scalar::ratio(1, 2)}, 1.0),
          WeightSpec({Scalar(0), Scalar(1)}, PowerLawTail{Scalar(2), 0.25}, 3.0)};
}

// ---------------------------------------------------------------- isometry

CheckReport check_isometry(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t trials = opts.trials.value_or(1000);
  Scalar max_exact(0);
  double max_float = 0.0;
  std::size_t inexact = 0;
  const std::vector<std::pair<std::string, WeightSpec>> ws{{"wA", wA()}, {"wB", wB()}, {"wC", wC()}};
  for (std::size_t f = 0; f < ws.size(); ++f) {
    const auto &[name, w] = ws[f];
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(trial_seed(opts.seed, f * trials + t));
      const Sequence x = random_finite(rng, 8);
      const CertifiedValue res = isometry_residual(w, x);
      if (name == "wB") {
        max_float = std::max(max_float, res.to_double());
      } else if (!res.exact()) {
        ++inexact;
      } else if (res.value > max_exact) {
        max_exact = res.value;
      }
    }
  }
  r.pass = inexact == 0 && max_exact.is_zero() && max_float <= 1e-9;
  r.details["max_residual"] = std::max(max_exact.to_double(), max_float);
  r.details["max_residual_rational"] = to_json(max_exact);
  r.details["max_residual_float"] = max_float;
  r.details["trials_per_weight"] = trials;
  return r;
}

CheckReport check_fundamental_identity(const VerifyOptions &) {
  CheckReport r;
  std::size_t mismatches = 0;
  double max_float = 0.0;
  for (const auto &w : {wA(), wC()}) {
    const auto v = derived_v_table(w, 100);
    Scalar sum(0);
    for (std::size_t n = 1; n <= 100; ++n) {
      sum = sum + v[n - 1].value;
      const CertifiedValue f = phi(w, n);
      if (!f.exact() || !v[n - 1].exact() || f.value != sum)
        ++mismatches;
    }
  }
  const WeightSpec b = wB();
  const auto v = derived_v_table(b, 100);
  double sum = 0.0;
  for (std::size_t n = 1; n <= 100; ++n) {
    sum += v[n - 1].to_double();
    max_float = std::max(max_float, std::fabs(phi(b, n).to_double() - sum));
  }
  r.pass = mismatches == 0 && max_float <= 1e-9;
  r.details["rational_mismatches"] = mismatches;
  r.details["max_float_deviation"] = max_float;
  return r;
}

// ---------------------------------------------------------------- duality

CheckReport check_duality(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t trials = opts.trials.value_or(1000);
  std::size_t holder_fail = 0, norming_fail = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence x = random_finite(rng, 8), y = random_finite(rng, 8);
    const CertifiedValue lhs = abs(pairing(x, y));
    const WeightSpec a = wA();
    const CertifiedValue ra = norm_m_psi(a, y).value * norm_gamma(a, x);
    if (!(lhs.value <= ra.value))
      ++holder_fail;
    const WeightSpec b = wB();
    const CertifiedValue rb = norm_m_psi(b, y).value * norm_gamma(b, x);
    if (lhs.to_double() > rb.upper() + 1e-12)
      ++holder_fail;

    const Sequence z = nonzero_finite(rng, 8);
    for (const auto &w : {wA(), wC()}) {
      const Sequence f = norming_functional(w, z);
      const CertifiedValue pv = pairing(z, f), nv = norm_gamma(w, z);
      const CertifiedValue m = norm_m_psi(w, f).value;
      if (!pv.exact() || !nv.exact() || pv.value != nv.value || !m.exact() || m.value != Scalar(1))
        ++norming_fail;
    }
  }
  r.pass = holder_fail == 0 && norming_fail == 0;
  r.details["holder_violations"] = holder_fail;
  r.details["norming_failures"] = norming_fail;
  r.details["trials"] = trials;
  return r;
}

CheckReport check_norming_element(const VerifyOptions &opts) {
  CheckReport r;
  const WeightSpec w = wB();
  const std::size_t trials = opts.trials.value_or(100);
  double max_norm_dev = 0.0, max_pair_dev = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence y = nonzero_finite(rng, 8);
    const NormingElement e = norming_element(w, y);
    max_norm_dev = std::max(max_norm_dev, std::fabs(norm_gamma(w, e.x).to_double() - 1.0));
    max_pair_dev = std::max(max_pair_dev, std::fabs(pairing(e.x, y).to_double() - norm_m_psi(w, y).value.to_double()));
  }

  // approximants x_m on sigma([1, m]): quotients along record indices
  std::size_t case2_fail = 0;
  const std::size_t case2 = std::max<std::size_t>(1, trials / 5);
  for (std::size_t t = 0; t < case2; ++t) {
    Rng rng(trial_seed(opts.seed + 1, t));
    Sequence head = random_finite(rng, 4).abs();
    const Sequence y = head + Sequence({}, GeometricTail{random_rational(rng, 6, 4).sign() == 0
                                                            ? Scalar(1)
                                                            : abs(random_rational(rng, 6, 4)) + Scalar(1),
                                                        Scalar::ratio(uniform_int(rng, 1, 4), 5)});
    const SupResult s = norm_m_psi(w, y);
    double record = -1.0;
    std::vector<double> records;
    const std::size_t horizon = y.head_size() + 40;
    for (std::size_t m = 1; m <= horizon; ++m) {
      const NormingElement e = norming_element(w, y, m);
      const double q = e.quotient.to_double();
      if (std::fabs(norm_gamma(w, e.x).to_double() - 1.0) > 1e-9 ||
          std::fabs(pairing(e.x, y).to_double() - q) > 1e-9)
        ++case2_fail;
      if (q >= record) {
        record = q;
        records.push_back(q);
      }
    }
    if (!std::is_sorted(records.begin(), records.end()) || std::fabs(record - s.value.to_double()) > 1e-9)
      ++case2_fail;
  }
  r.pass = max_norm_dev <= 1e-9 && max_pair_dev <= 1e-9 && case2_fail == 0;
  r.details["max_norm_deviation"] = max_norm_dev;
  r.details["max_pairing_deviation"] = max_pair_dev;
  r.details["case2_failures"] = case2_fail;
  return r;
}

CheckReport check_predual(const VerifyOptions &opts) {
  CheckReport r;
  const WeightSpec w = wB();
  const std::size_t trials = opts.trials.value_or(300);
  std::size_t fail = 0;
  double max_dev = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence x = nonzero_finite(rng, 8);
    const Sequence y = norming_functional(w, x);
    if (!in_m_psi0(w, y))
      ++fail;
    max_dev = std::max(max_dev, std::fabs(norm_m_psi(w, y).value.to_double() - 1.0));
    max_dev = std::max(max_dev, std::fabs(pairing(x, y).to_double() - norm_gamma(w, x).to_double()));
    // y' in m_psi0 with a geometric tail
    const Sequence yg = random_finite(rng, 4) + Sequence({}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
    if (!in_m_psi0(w, yg))
      ++fail;
    if (abs(pairing(x, yg)).to_double() > norm_m_psi(w, yg).value.upper() * norm_gamma(w, x).upper() + 1e-12)
      ++fail;
  }
  const RegimeReport reg = regime(w);
  r.pass = fail == 0 && max_dev <= 1e-9 && reg.predual_is_m_psi0 && !regime(wA()).predual_is_m_psi0;
  r.details["failures"] = fail;
  r.details["max_deviation"] = max_dev;
  return r;
}

// ---------------------------------------------------------------- extreme points

bool verified_pair(const WeightSpec &w, const Sequence &x, const std::pair<Sequence, Sequence> &pair) {
  const auto &[y, z] = pair;
  if (y == z)
    return false;
  const Sequence sum = y + z;
  for (std::size_t i = 1; i <= std::max(sum.head_size(), x.head_size()) + 1; ++i)
    if (sum.at(i) != Scalar(2) * Scalar::exact_from_double(x.at(i).to_double()))
      return false;
  const CertifiedValue ny = norm_gamma(w, y), nz = norm_gamma(w, z);
  auto unit = [](const CertifiedValue &n) {
    return n.exact() ? n.value == Scalar(1) : std::fabs(n.to_double() - 1.0) <= 1e-9;
  };
  return unit(ny) && unit(nz);
}

CheckReport check_extreme(const VerifyOptions &opts) {
  CheckReport r;
  const WeightSpec w = wB();
  const std::size_t n = 6, budget = 100000;
  std::size_t positives = 0, pos_fail = 0;
  std::uint64_t k = 0;
  for_each_extreme_point(w, n, [&](const ExtremePoint &e) {
    const Sequence x = e.sequence();
    ++positives;
    if (!classify_extreme_gamma1(w, x).result || extreme_midpoint_oracle(w, x, n, budget, trial_seed(opts.seed, k++)))
      ++pos_fail;
  });

  const std::size_t negatives = opts.trials.value_or(200);
  std::size_t neg_fail = 0, done = 0;
  for (std::uint64_t t = 0; done < negatives; ++t) {
    Rng rng(trial_seed(opts.seed + 17, t));
    const Sequence raw = nonzero_finite(rng, n);
    const Sequence xs = rearrangement(raw);
    if (xs.at(1) == xs.at(xs.head_size()))
      continue; // flat: not a negative
    ++done;
    const Sequence x = normalized(w, raw);
    const Verdict v = classify_extreme_gamma1(w, x);
    if (v.result || !v.pair || !verified_pair(w, x, *v.pair))
      ++neg_fail;
    else if (!extreme_midpoint_oracle(w, x, n, budget, t))
      ++neg_fail;
  }
  r.pass = pos_fail == 0 && neg_fail == 0 && positives == extreme_point_count(w, n);
  r.details["positives"] = positives;
  r.details["positive_disagreements"] = pos_fail;
  r.details["negatives"] = done;
  r.details["negative_disagreements"] = neg_fail;
  return r;
}

// ---------------------------------------------------------------- strict convexity

CheckReport check_strict_convexity(const VerifyOptions &opts) {
  CheckReport r;
  struct Case {
    std::string name;
    CounterexampleKind kind;
    WeightSpec w;
    std::optional<Scalar> eps;
    bool exact;
  };
  // W = 4 keeps the p = 2 normalizations rational
  const WeightSpec square({Scalar(3), Scalar(1)}, ZeroTail{}, 2.0);
  const std::vector<Case> cases{
      {"SC_p1 (wA)", CounterexampleKind::sc_p1, wA(), std::nullopt, true},
      {"SC_p1 (wB)", CounterexampleKind::sc_p1, wB(), std::nullopt, false},
      {"SC_Winf (wA, p=1)", CounterexampleKind::sc_winf, wA(), std::nullopt, true},
      {"SC_Winf (wA, p=2)", CounterexampleKind::sc_winf, wA(2.0), std::nullopt, false},
      {"SC_Winf ((3,1), p=2)", CounterexampleKind::sc_winf, square, std::nullopt, true},
      {"SC_zero_weight_n0_1 (wC, p=2)", CounterexampleKind::sc_zero_weight_n0_1, wC(2.0), Scalar::ratio(1, 2), true},
      {"SC_zero_weight_n0_gt1 (wA, p=2)", CounterexampleKind::sc_zero_weight_n0_gt1, wA(2.0), std::nullopt, false},
      {"SC_zero_weight_n0_gt1 ((3,1), p=2)", CounterexampleKind::sc_zero_weight_n0_gt1, square, std::nullopt, true},
      {"SC_zero_weight_n0_gt1 (1,0,1)", CounterexampleKind::sc_zero_weight_n0_gt1,
       WeightSpec{Scalar(1), Scalar(0), Scalar(1)}, std::nullopt, true},
  };
  json bundles = json::object();
  for (const auto &c : cases) {
    const CounterexampleBundle b = counterexample(c.kind, c.w, c.eps);
    const bool all_exact = std::all_of(b.checks.begin(), b.checks.end(), [](const auto &k) { return k.exact; });
    const bool ok = b.verified && (!c.exact || all_exact);
    bundles[c.name] = json{{"verified", b.verified}, {"exact", all_exact}};
    r.pass = r.pass && ok;
  }
  r.details["bundles"] = bundles;

  // strictly convex regime: p = 2, all weights positive, W(infinity) = infinity
  const WeightSpec w = wB(2.0);
  const std::size_t trials = opts.trials.value_or(1000);
  std::size_t fail = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence a = nonzero_finite(rng, 6), b = nonzero_finite(rng, 6);
    if (positively_proportional(a, b))
      continue; // the same sphere point
    const Sequence x = normalized(w, a), y = normalized(w, b);
    const double mid = norm_gamma(w, (x + y).scaled(Scalar::ratio(1, 2))).to_double();
    worst = std::max(worst, mid);
    if (mid > 1.0 - 1e-12)
      ++fail;
  }
  const bool flags = regime(w).strictly_convex && !regime(wB()).strictly_convex && !regime(wA(2.0)).strictly_convex;
  r.pass = r.pass && fail == 0 && flags;
  r.details["midpoint_failures"] = fail;
  r.details["max_midpoint_norm"] = worst;
  r.details["regime_flags_consistent"] = flags;
  return r;
}

// ---------------------------------------------------------------- order continuity / monotonicity

Sequence random_geometric(Rng &rng) {
  static const Scalar ratios[] = {Scalar::ratio(1, 2), Scalar::ratio(2, 3), Scalar::ratio(3, 4), Scalar::ratio(9, 10)};
  const Sequence head = random_finite(rng, 5);
  const Scalar a = abs(random_rational(rng, 6, 4)) + Scalar::ratio(1, 4);
  return head + Sequence({}, GeometricTail{a, ratios[uniform_int(rng, 0, 3)]});
}

CheckReport check_tail_vanishing(const VerifyOptions &opts) {
  CheckReport r;
  const WeightSpec w = wB();
  const std::size_t trials = opts.trials.value_or(100);
  std::size_t fail = 0, max_m = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence x = random_geometric(rng);
    double last = std::numeric_limits<double>::infinity();
    bool reached = false;
    for (std::size_t m = 0; m <= 400 && !reached; m += 8) {
      const CertifiedValue n = norm_gamma(w, tail_after(x, m));
      if (n.to_double() > last + 1e-12)
        ++fail;
      last = n.to_double();
      if (n.upper() < 1e-6) {
        reached = true;
        max_m = std::max(max_m, m);
      }
    }
    if (!reached)
      ++fail;
  }
  r.pass = fail == 0;
  r.details["failures"] = fail;
  r.details["largest_truncation_needed"] = max_m;
  return r;
}

CheckReport check_oc_sm_bundles(const VerifyOptions &) {
  CheckReport r;
  for (auto kind : {CounterexampleKind::sm_failure, CounterexampleKind::oc_failure}) {
    const CounterexampleBundle b = counterexample(kind, wA());
    bool threes = true;
    for (const auto &c : b.checks)
      if (c.name.rfind("||", 0) == 0 || c.name.find("W(inf)") != std::string::npos)
        threes = threes && c.lhs.exact() && c.lhs.value == Scalar(3);
    r.details[to_string(kind)] = json{{"verified", b.verified}, {"norms_equal_3", threes}};
    r.pass = r.pass && b.verified && threes;
  }
  return r;
}

CheckReport check_regime_catalogue(bool order_continuity) {
  CheckReport r;
  json rows = json::array();
  for (const auto &w : regime_catalogue()) {
    const RegimeReport rep = regime(w);
    const bool flag = order_continuity ? rep.order_continuous : rep.strictly_monotone;
    bool ok = flag == rep.W_infinite;
    if (!rep.W_infinite) {
      const auto kind = order_continuity ? CounterexampleKind::oc_failure : CounterexampleKind::sm_failure;
      ok = ok && counterexample(kind, w).verified;
    }
    rows.push_back(json{{"weights", to_json(w)}, {"W_infinite", rep.W_infinite}, {"flag", flag}, {"ok", ok}});
    r.pass = r.pass && ok;
  }
  r.details["catalogue"] = rows;
  return r;
}

CheckReport check_strict_monotonicity(const VerifyOptions &opts) {
  CheckReport r;
  const WeightSpec w = wB();
  const std::size_t trials = opts.trials.value_or(300);
  std::size_t fail = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence y = nonzero_finite(rng, 6).abs();
    std::vector<Scalar> h = y.head();
    std::size_t i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(h.size()) - 1));
    while (h[i].is_zero())
      i = (i + 1) % h.size();
    h[i] = h[i] * Scalar::ratio(uniform_int(rng, 0, 3), 4);
    const Sequence x(std::move(h));
    if (!(norm_gamma(w, x).upper() < norm_gamma(w, y).lower()))
      ++fail;
  }
  r.pass = fail == 0;
  r.details["failures"] = fail;
  return r;
}

// ---------------------------------------------------------------- rearrangement lemma / remark

CheckReport check_rearrangement_convergence(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t trials = opts.trials.value_or(1000);
  const std::size_t window = 50, stages = 9;
  std::size_t counterexamples = 0;
  double worst_final = 0.0;
  std::vector<Scalar> grid;
  for (long k = 2; k <= 8; ++k)
    grid.push_back(Scalar(Rational(1, static_cast<unsigned long>(std::pow(10.0, static_cast<double>(k))))));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const int shape = static_cast<int>(t % 3);
    Sequence x = random_finite(rng, 8);
    if (shape == 2)
      x = x + Sequence({}, ConstantTail{abs(random_rational(rng, 6, 4)) + Scalar::ratio(1, 8)});
    Sequence u = random_finite(rng, 12, 4, 4);
    if (shape == 1)
      u = u + Sequence({}, GeometricTail{Scalar(1), Scalar::ratio(uniform_int(rng, 1, 3), 4)});
    if (shape == 2)
      u = u.abs() + Sequence({}, ConstantTail{Scalar(1)});
    const Sequence xs = rearrangement(x);
    bool bad = false;
    double final_gap = 0.0;
    for (std::size_t m = 1; m <= stages; ++m) {
      const Scalar delta(Rational(1, static_cast<unsigned long>(std::pow(10.0, static_cast<double>(m + 1)))));
      const Sequence xm = x + u.scaled(delta);
      const Sequence ms = rearrangement(xm);
      double gap = 0.0;
      for (std::size_t n = 1; n <= window; ++n)
        gap = std::max(gap, std::fabs((ms.at(n) - xs.at(n)).to_double()));
      if (m == stages) {
        final_gap = gap;
        for (const auto &eps : grid)
          if (!(measure_gap(xm, x, eps) == ExtendedCount::finite(0)))
            bad = true;
      }
    }
    worst_final = std::max(worst_final, final_gap);
    if (bad || final_gap >= 1e-8)
      ++counterexamples;
  }
  r.pass = counterexamples == 0;
  r.details["trials"] = trials;
  r.details["counterexamples"] = counterexamples;
  r.details["max_final_sup_gap"] = worst_final;
  return r;
}

CheckReport check_remark_additivity(const VerifyOptions &opts) {
  CheckReport r;
  // pairs up to a simultaneous permutation of the coordinates: multisets of
  // five columns (x(i), y(i)) drawn from {-2..2}^2
  std::size_t pairs = 0, unrestricted = 0, nested = 0;
  std::vector<int> idx(5, 0);
  auto column = [](int c) { return std::pair<int, int>{c / 5 - 2, c % 5 - 2}; };
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int from) {
    if (pos == idx.size()) {
      std::vector<Scalar> xh, yh;
      for (int c : idx) {
        xh.emplace_back(column(c).first);
        yh.emplace_back(column(c).second);
      }
      const Sequence x(xh), y(yh);
      const bool add = additivity_holds(x, y, 5);
      unrestricted += add != sign_window_condition(x, y, WindowSets::unrestricted);
      nested += add != sign_window_condition(x, y, WindowSets::nested);
      ++pairs;
      return;
    }
    for (int c = from; c < 25; ++c) {
      idx[pos] = c;
      rec(pos + 1, c);
    }
  };
  rec(0, 0);

  // both sides are invariant under simultaneous permutations
  std::size_t invariance_fail = 0;
  for (std::size_t t = 0; t < opts.trials.value_or(1000); ++t) {
    Rng rng(trial_seed(opts.seed, t));
    std::vector<Scalar> xh(5), yh(5);
    for (std::size_t i = 0; i < 5; ++i) {
      xh[i] = Scalar(uniform_int(rng, -2, 2));
      yh[i] = Scalar(uniform_int(rng, -2, 2));
    }
    const Sequence x(xh), y(yh);
    const auto perm = random_permutation(rng, 5);
    const std::vector<int> plus(5, 1);
    const Sequence px = permute_and_flip(x, perm, plus), py = permute_and_flip(y, perm, plus);
    if (additivity_holds(x, y, 5) != additivity_holds(px, py, 5) ||
        sign_window_condition(x, y) != sign_window_condition(px, py))
      ++invariance_fail;
  }
  r.pass = unrestricted == 0 && invariance_fail == 0;
  r.details["pairs_up_to_permutation"] = pairs;
  r.details["discrepancies_unrestricted"] = unrestricted;
  r.details["discrepancies_nested"] = nested;
  r.details["invariance_failures"] = invariance_fail;
  return r;
}

// ---------------------------------------------------------------- Fatou / embedding / Hardy-Littlewood

CheckReport check_fatou(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t trials = opts.trials.value_or(100);
  std::size_t fail = 0;
  for (const auto &w : {wA(), wB(), wB(2.0)}) {
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(trial_seed(opts.seed, t));
      const Sequence x = random_geometric(rng).abs();
      const CertifiedValue full = norm_gamma(w, x);
      double last = 0.0;
      double final_value = 0.0;
      for (std::size_t m = 1; m <= 400; m += (m < 16 ? 1 : 16)) {
        const double v = norm_gamma(w, head_part(x, m)).to_double();
        if (v < last - 1e-12 || v > full.upper() + 1e-12)
          ++fail;
        last = v;
        final_value = v;
      }
      if (full.to_double() - final_value > 1e-6)
        ++fail;
    }
  }
  // constant tails under a finite W: truncations reach the norm
  const CertifiedValue chi = norm_gamma(wA(), Sequence({}, ConstantTail{Scalar(1)}));
  if (!(norm_gamma(wA(), Sequence::indicator(2)).value == chi.value))
    ++fail;
  r.pass = fail == 0 && regime(wB()).fatou && regime(wA()).fatou;
  r.details["failures"] = fail;
  return r;
}

CheckReport check_embedding(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t trials = opts.trials.value_or(1000);
  double worst = 0.0;
  const std::vector<std::pair<std::string, WeightSpec>> ws{{"wA p=1", wA()}, {"wB p=1", wB()}, {"wB p=2", wB(2.0)}};
  for (std::size_t f = 0; f < ws.size(); ++f)
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(trial_seed(opts.seed, f * trials + t));
      const Sequence x = random_finite(rng, 8);
      worst = std::min(worst, embedding_gap(ws[f].second, x).to_double());
    }
  double e1 = 0.0;
  for (const auto &w : {wA(), wB()})
    e1 = std::max(e1, std::fabs(embedding_gap(w, Sequence::unit(1)).to_double()));
  r.pass = worst >= -1e-12 && e1 <= 1e-9;
  r.details["min_gap"] = worst;
  r.details["unit_vector_gap"] = e1;
  return r;
}

CheckReport check_hardy_littlewood(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t trials = opts.trials.value_or(1000);
  std::size_t fail = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const Sequence x = random_finite(rng, 8), y = random_finite(rng, 8);
    const CertifiedValue g = hardy_littlewood_gap(x, y);
    if (!g.exact() || g.value.sign() < 0)
      ++fail;
    // equality for a decreasing nonnegative pair
    const Sequence xs = rearrangement(x), ys = rearrangement(y);
    if (!hardy_littlewood_gap(xs, ys).value.is_zero())
      ++fail;
  }
  r.pass = fail == 0;
  r.details["failures"] = fail;
  return r;
}

// ---------------------------------------------------------------- classifiers under symmetries

using Classifier = std::function<Verdict(const WeightSpec &, const Sequence &)>;

struct Fixture {
  std::string name;
  WeightSpec w;
  Sequence x;
  bool expected;
};

CheckReport check_invariance(const std::string &kind, const Classifier &classify, const std::vector<Fixture> &fx,
                             const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t perms = opts.trials.value_or(100);
  json rows = json::array();
  for (std::size_t f = 0; f < fx.size(); ++f) {
    const Verdict base = classify(fx[f].w, fx[f].x);
    std::size_t changed = 0;
    const std::size_t len = fx[f].x.head_size() + 3;
    for (std::size_t t = 0; t < perms; ++t) {
      Rng rng(trial_seed(opts.seed, f * perms + t));
      const Sequence y = permute_and_flip(fx[f].x, random_permutation(rng, len), random_signs(rng, len));
      if (classify(fx[f].w, y).result != base.result)
        ++changed;
    }
    const bool ok = base.result == fx[f].expected && changed == 0;
    rows.push_back(json{{"fixture", fx[f].name}, {"result", base.result}, {"expected", fx[f].expected}, {"changed", changed}});
    r.pass = r.pass && ok;
  }
  r.details[kind] = rows;
  return r;
}

std::vector<Fixture> extreme_dual_fixtures() {
  return {{"x* = v (wA)", wA(), Sequence({Scalar::ratio(5, 2), Scalar::ratio(1, 2)}), true},
          {"x* = v reversed (wA)", wA(), Sequence({Scalar::ratio(1, 2), Scalar::ratio(5, 2)}), true},
          {"x* = v (wC)", wC(), Sequence({Scalar::ratio(1, 2), Scalar::ratio(1, 2)}), true},
          {"x* != v (wA)", wA(), Sequence({Scalar::ratio(5, 2)}), false}};
}

std::vector<Fixture> smooth_gamma1_fixtures() {
  const Sequence g({Scalar(1)}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  const Sequence tie({Scalar(1), Scalar(1)}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  const WeightSpec zero_first = WeightSpec::power_law(1, 0.5, 1.0, {Scalar(0)});
  return {{"geometric (wA)", wA(), normalized(wA(), g), true},
          {"finite support (wA)", wA(), normalized(wA(), Sequence({Scalar(2), Scalar(1)})), false},
          {"tie at n=1 (wA)", wA(), normalized(wA(), tie), false},
          {"tie at a zero weight", zero_first, normalized(zero_first, tie), true}};
}

std::vector<Fixture> smooth_predual_fixtures() {
  const WeightSpec w = wB();
  const CertifiedValue f1 = phi(w, 1), f2 = phi(w, 2);
  return {{"e1 phi(1) (wB)", w, Sequence({f1.value}), true},
          {"two attaining indices (wB)", w, Sequence({f1.value, Scalar::from_double(f2.to_double() - f1.to_double())}),
           false}};
}

std::vector<Fixture> smooth_dual_fixtures() {
  const WeightSpec w = wB();
  const CertifiedValue f1 = phi(w, 1), f2 = phi(w, 2), f3 = phi(w, 3);
  const Sequence halves({}, GeometricTail{Scalar(1), Scalar::ratio(1, 2)});
  return {{"e1 phi(1) (wB)", w, Sequence({f1.value}), true},
          {"plateau (wB)", w, Sequence({f1.value, Scalar::from_double(f2.to_double() - f1.to_double())}), false},
          {"three-step plateau (wB)", w,
           Sequence({f1.value, Scalar::from_double(f2.to_double() - f1.to_double()),
                     Scalar::from_double(f3.to_double() - f2.to_double())}),
           false},
          {"geometric (wB)", w, halves.scaled(reciprocal(norm_m_psi(w, halves).value)), true}};
}

CheckReport check_extreme_dual(const VerifyOptions &opts) {
  CheckReport r = check_invariance("extreme-dual", classify_extreme_dual, extreme_dual_fixtures(), opts);
  // the fixture x* = v sits on the sphere exactly
  const CertifiedValue n = norm_m_psi(wA(), extreme_dual_fixtures()[0].x).value;
  const bool exact_one = n.exact() && n.value == Scalar(1);
  // sphere membership for random zero-tail weights
  std::size_t fail = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng(trial_seed(opts.seed + 5, t));
    const Sequence wh = nonzero_finite(rng, 6).abs();
    const WeightSpec w(wh.head(), ZeroTail{}, 1.0);
    const Sequence v = derived_v_sequence(w);
    const std::size_t len = v.head_size();
    const Sequence x = permute_and_flip(v, random_permutation(rng, len), random_signs(rng, len));
    const Verdict verdict = classify_extreme_dual(w, x);
    const CertifiedValue m = norm_m_psi(w, x).value;
    if (!verdict.result || !m.exact() || m.value != Scalar(1))
      ++fail;
  }
  r.pass = r.pass && exact_one && fail == 0;
  r.details["fixture_norm_exactly_one"] = exact_one;
  r.details["random_weight_failures"] = fail;
  return r;
}

CheckReport check_smooth_gamma1(const VerifyOptions &opts) {
  return check_invariance("smooth-gamma1", classify_smooth_gamma1, smooth_gamma1_fixtures(), opts);
}

CheckReport check_smooth_predual(const VerifyOptions &opts) {
  return check_invariance("smooth-predual", classify_smooth_predual, smooth_predual_fixtures(), opts);
}

CheckReport check_smooth_dual(const VerifyOptions &opts) {
  return check_invariance("smooth-dual", classify_smooth_dual, smooth_dual_fixtures(), opts);
}

// ---------------------------------------------------------------- projections

CheckReport check_projection(const VerifyOptions &opts) {
  CheckReport r;
  const std::size_t instances = opts.trials.value_or(200);
  const std::vector<WeightSpec> ws{wA(), wB(), wC()};
  double worst = 0.0;
  std::size_t done = 0;
  for (std::uint64_t t = 0; done < instances; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 10));
    const std::size_t dim = static_cast<std::size_t>(uniform_int(rng, 1, std::min<long>(3, static_cast<long>(n) - 1)));
    std::vector<Vector> basis(dim, Vector(n));
    for (auto &b : basis)
      for (auto &e : b)
        e = random_rational(rng, 6, 4);
    Vector x(n);
    for (auto &e : x)
      e = random_rational(rng, 6, 4);
    try {
      const ProjectionResult p = metric_projection(ws[done % 3], x, basis, 1e-9, t);
      worst = std::max(worst, std::fabs(*p.oracle_gap));
      ++done;
    } catch (const std::invalid_argument &) {
      // dependent basis: draw again
    }
  }

  const WeightSpec w = wB();
  std::size_t certified = 0, uncertified = 0;
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t k = 1; k < n; ++k) {
      Rng rng(trial_seed(opts.seed + 3, n * 16 + k));
      auto perm = random_permutation(rng, n);
      for (const bool leading : {true, false}) {
        std::vector<std::size_t> coords;
        for (std::size_t i = 0; i < k; ++i)
          coords.push_back(leading ? i + 1 : perm[i] + 1);
        std::vector<Vector> basis;
        for (std::size_t c : coords) {
          Vector e(n, Scalar(0));
          e[c - 1] = Scalar(1);
          basis.push_back(e);
        }
        const Matrix p = coordinate_projection(n, coords);
        const CertifiedValue norm = operator_norm_via_extremes(w, n, p);
        if (norm.exact() && norm.value == Scalar(1) && is_norm_one_projection(w, n, p, basis).result)
          ++certified;
        else
          ++uncertified;
      }
    }
  r.pass = worst <= 1e-6 && uncertified == 0;
  r.details["instances"] = done;
  r.details["max_oracle_gap"] = worst;
  r.details["coordinate_projections_certified"] = certified;
  r.details["coordinate_projections_uncertified"] = uncertified;
  return r;
}

// ---------------------------------------------------------------- tables

using Check = std::function<CheckReport(const VerifyOptions &)>;

const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Check>>>> &batteries() {
  static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Check>>>> table{
      {"OC-iff-Winf",
       {{"regime", [](const VerifyOptions &) { return check_regime_catalogue(true); }},
        {"bundles", check_oc_sm_bundles},
        {"tail_vanishing", check_tail_vanishing}}},
      {"SM-iff-Winf",
       {{"regime", [](const VerifyOptions &) { return check_regime_catalogue(false); }},
        {"bundles", check_oc_sm_bundles},
        {"strict_monotonicity", check_strict_monotonicity}}},
      {"SC-characterization", {{"strict_convexity", check_strict_convexity}}},
      {"extreme-gamma1", {{"classifier_vs_oracle", check_extreme}}},
      {"dual-is-mpsi", {{"duality", check_duality}, {"norming_element", check_norming_element}}},
      {"predual-is-mpsi0", {{"predual", check_predual}}},
      {"isometry-d1v", {{"isometry", check_isometry}, {"fundamental_identity", check_fundamental_identity}}},
      {"lemma-rearrangement-convergence", {{"convergence", check_rearrangement_convergence}}},
      {"remark-additivity", {{"equivalence", check_remark_additivity}}},
      {"fatou", {{"truncations", check_fatou}}},
      {"embedding-constant-1", {{"embedding", check_embedding}}},
      {"hardy-littlewood", {{"inequality", check_hardy_littlewood}}},
      {"extreme-dual", {{"classifier", check_extreme_dual}}},
      {"smooth-gamma1", {{"classifier", check_smooth_gamma1}}},
      {"smooth-predual", {{"classifier", check_smooth_predual}}},
      {"smooth-dual", {{"classifier", check_smooth_dual}}},
      {"projection-oracle", {{"projection", check_projection}}},
  };
  return table;
}

} // namespace

const std::vector<std::string> &battery_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto &[label, checks] : batteries())
      out.push_back(label);
    return out;
  }();
  return labels;
}

CheckReport run_battery(const std::string &label, const VerifyOptions &opts) {
  if (label == "isometry") {
    // the single-check form keeps the residual at top level
    CheckReport r = check_isometry(opts);
    return r;
  }
  for (const auto &[name, checks] : batteries()) {
    if (name != label)
      continue;
    CheckReport r;
    for (const auto &[key, check] : checks)
      merge(r, key, check(opts));
    return r;
  }
  throw std::invalid_argument("unknown verification suite: " + label);
}

json run_suite(const std::string &suite, const VerifyOptions &opts) {
  if (suite != "all") {
    const CheckReport r = run_battery(suite, opts);
    json out{{"pass", r.pass}};
    for (const auto &[k, v] : r.details.items())
      out[k] = v;
    return out;
  }
  json results = json::object();
  bool pass = true;
  for (const auto &label : battery_labels()) {
    const CheckReport r = run_battery(label, opts);
    pass = pass && r.pass;
    results[label] = json{{"pass", r.pass}, {"details", r.details}};
  }
  return json{{"pass", pass}, {"results", results}};
}

std::string acceptance_title(int criterion) {
  static const char *titles[] = {
      "isometry gamma_{1,w} = d_{1,v}",
      "fundamental identity phi(n) = sum v(i)",
      "duality: Holder bound and norming attainment",
      "norming element",
      "extreme points: classifier vs midpoint oracle",
      "strict convexity dichotomy",
      "monotonicity and order continuity dichotomy",
      "rearrangement convergence battery",
      "additivity equivalence battery",
      "embedding constant 1",
      "projection suite",
      "dual classifiers and symmetry invariance",
  };
  if (criterion < 1 || criterion > 12)
    throw std::invalid_argument("acceptance criteria are numbered 1 to 12");
  return titles[criterion - 1];
}

CheckReport acceptance_check(int criterion, const VerifyOptions &opts) {
  CheckReport r;
  switch (criterion) {
  case 1:
    return check_isometry(opts);
  case 2:
    return check_fundamental_identity(opts);
  case 3:
    return check_duality(opts);
  case 4:
    return check_norming_element(opts);
  case 5:
    return check_extreme(opts);
  case 6:
    return check_strict_convexity(opts);
  case 7:
    merge(r, "bundles", check_oc_sm_bundles(opts));
    merge(r, "tail_vanishing", check_tail_vanishing(opts));
    return r;
  case 8:
    return check_rearrangement_convergence(opts);
  case 9:
    return check_remark_additivity(opts);
  case 10:
    return check_embedding(opts);
  case 11:
    return check_projection(opts);
  case 12:
    merge(r, "extreme_dual", check_extreme_dual(opts));
    merge(r, "smooth_gamma1", check_smooth_gamma1(opts));
    merge(r, "smooth_predual", check_smooth_predual(opts));
    merge(r, "smooth_dual", check_smooth_dual(opts));
    return r;
  default:
    throw std::invalid_argument("acceptance criteria are numbered 1 to 12");
  }
}

} // namespace lorentz
