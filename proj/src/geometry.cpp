#include "lorentz/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "lorentz/rearrangement.hpp"

namespace lorentz {

namespace {

void require_unit_p(const WeightSpec &w, const char *what) {
  if (w.p() != 1.0)
    throw std::domain_error(std::string(what) + ": requires p = 1");
}

void require_infinite_W(const WeightSpec &w, const char *what) {
  if (!W_inf_class(w).infinite)
    throw RegimeError(std::string(what) + ": requires W(infinity) = infinity");
}

bool is_one(const CertifiedValue &v, double tol = kSphereTolerance) {
  if (v.is_infinite())
    return false;
  if (v.exact())
    return v.value == Scalar(1);
  return std::fabs(v.to_double() - 1.0) <= tol + v.error;
}

bool same(const CertifiedValue &a, const CertifiedValue &b, double tol = kSphereTolerance) {
  if (a.is_infinite() || b.is_infinite())
    return a.is_infinite() && b.is_infinite();
  if (a.exact() && b.exact())
    return a.value == b.value;
  return std::fabs(a.to_double() - b.to_double()) <= tol + a.error + b.error;
}

void require_gamma_sphere(const WeightSpec &w, const Sequence &x, const char *what) {
  if (!is_one(norm_gamma(w, x)))
    throw SphereError(std::string(what) + ": x is not on the unit sphere of gamma_{1,w}");
}

void require_m_psi_sphere(const WeightSpec &w, const Sequence &x, const char *what) {
  if (!is_one(norm_m_psi(w, x).value))
    throw SphereError(std::string(what) + ": x is not on the unit sphere of m_psi");
}

Scalar exactified(const Scalar &s) { return s.is_exact() ? s : Scalar::exact_from_double(s.to_double()); }

// The same sequence with every float entry replaced by its exact binary value.
Sequence exactified(const Sequence &x) {
  std::vector<Scalar> head;
  head.reserve(x.head_size());
  for (const auto &v : x.head())
    head.push_back(exactified(v));
  TailClass tail = x.tail();
  if (auto *c = std::get_if<ConstantTail>(&tail))
    c->c = exactified(c->c);
  else if (auto *g = std::get_if<GeometricTail>(&tail))
    *g = GeometricTail{exactified(g->a), exactified(g->r)};
  return Sequence(std::move(head), tail);
}

int sign_or_plus(const Scalar &s) { return s.sign() < 0 ? -1 : 1; }

// x +/- delta, with delta given on ranked positions.
std::pair<Sequence, Sequence> split_along(const Sequence &x, const std::vector<std::size_t> &positions,
                                          const std::vector<Scalar> &delta) {
  std::size_t len = 0;
  for (auto p : positions)
    len = std::max(len, p);
  std::vector<Scalar> d(len, Scalar(0));
  for (std::size_t k = 0; k < positions.size(); ++k)
    d[positions[k] - 1] = d[positions[k] - 1] + delta[k];
  Sequence ds(std::move(d));
  return {x + ds, x - ds};
}

// Length of the run of values equal to x*(start).
std::size_t plateau_length(const Sequence &xs, std::size_t start) {
  const Scalar top = xs.at(start);
  std::size_t n = start;
  const std::size_t limit = xs.head_size() + 2;
  while (n + 1 <= limit && xs.at(n + 1) == top)
    ++n;
  return n - start + 1;
}

// The gamma_{1,w} norm restricted to R^N: sum of sorted |z| against v.
double fast_norm(const std::vector<double> &v, std::vector<double> z) {
  for (auto &e : z)
    e = std::fabs(e);
  std::sort(z.begin(), z.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    s += z[i] * v[i];
  return s;
}

} // namespace

std::vector<std::size_t> rank_positions(const Sequence &x, std::size_t count, TieBreak ties) {
  if (ties == TieBreak::highest_index_first && !x.has_zero_tail())
    throw std::invalid_argument("rank_positions: highest-index-first ties need finite support");
  const Sequence xm = x.materialized(x.head_size() + count);
  std::vector<std::size_t> nonzero, zero;
  for (std::size_t i = 1; i <= xm.head_size(); ++i)
    (xm.head()[i - 1].is_zero() ? zero : nonzero).push_back(i);
  std::stable_sort(nonzero.begin(), nonzero.end(), [&](std::size_t a, std::size_t b) {
    const Scalar ma = abs(xm.at(a)), mb = abs(xm.at(b));
    if (ma != mb)
      return ma > mb;
    return ties == TieBreak::lowest_index_first ? a < b : a > b;
  });
  nonzero.insert(nonzero.end(), zero.begin(), zero.end());
  nonzero.resize(count);
  return nonzero;
}

std::pair<Sequence, Sequence> plateau_decomposition(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "plateau_decomposition");
  const Sequence xe = exactified(x);
  const Sequence xs = rearrangement(xe);
  if (xs.has_constant_tail())
    throw std::invalid_argument("plateau_decomposition: constant tails are not supported");
  const std::size_t n0 = plateau_length(xs, 1);
  const Scalar top = xs.at(1), second = xs.at(n0 + 1);
  if (second.is_zero())
    throw std::invalid_argument("plateau_decomposition: x* is flat");
  const std::size_t n1 = plateau_length(xs, n0 + 1);
  const Scalar next = xs.at(n0 + n1 + 1);
  const Scalar d = min(top - second, second - next);

  const CertifiedValue f0 = phi(w, n0), f1 = phi(w, n0 + n1);
  Scalar a, b;
  if (f0.exact() && f1.exact()) {
    const Scalar rho = (f1.value - f0.value) / f0.value;
    a = d / (Scalar(2) * (Scalar(1) + rho));
    b = a * rho;
  } else {
    // a + b sits near d/2, well inside the order-preserving range (0, d)
    const double rho = (f1.to_double() - f0.to_double()) / f0.to_double();
    const double ad = d.to_double() / (2.0 * (1.0 + rho));
    a = Scalar::exact_from_double(ad);
    b = Scalar::exact_from_double(ad * rho);
  }

  const std::vector<std::size_t> pos = rank_positions(xe, n0 + n1);
  std::vector<Scalar> delta;
  for (std::size_t k = 1; k <= n0 + n1; ++k) {
    const Scalar &mag = k <= n0 ? b : a;
    const int s = sign_or_plus(xe.at(pos[k - 1]));
    delta.push_back(k <= n0 ? -(mag * Scalar(s)) : mag * Scalar(s));
  }
  return split_along(xe, pos, delta);
}

std::pair<Sequence, Sequence> swap_decomposition(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "swap_decomposition");
  const Sequence xe = exactified(x);
  const Sequence xs = rearrangement(xe);
  if (!xs.has_zero_tail() || xs.head_size() < 2 || plateau_length(xs, 1) != xs.head_size())
    throw std::invalid_argument("swap_decomposition: x* must be flat on at least two indices");
  const std::size_t n0 = xs.head_size();
  const Scalar a = xs.at(1) / Scalar(2);
  const std::vector<std::size_t> pos = rank_positions(xe, n0);
  std::vector<std::size_t> ends{pos.front(), pos.back()};
  std::vector<Scalar> delta{a * Scalar(sign_or_plus(xe.at(pos.front()))),
                            -(a * Scalar(sign_or_plus(xe.at(pos.back()))))};
  return split_along(xe, ends, delta);
}

Verdict classify_extreme_gamma1(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "classify_extreme_gamma1");
  require_infinite_W(w, "classify_extreme_gamma1");
  require_gamma_sphere(w, x, "classify_extreme_gamma1");

  Verdict out;
  const Sequence xs = rearrangement(x);
  const bool flat = xs.has_zero_tail() && plateau_length(xs, 1) == xs.head_size();
  out.conditions.push_back({"x* = chi_[1,n0] / phi(n0)", flat});
  if (!flat) {
    out.failed = "x* not flat";
    out.index = plateau_length(xs, 1) + 1;
    out.pair = plateau_decomposition(w, x);
    return out;
  }
  const std::size_t n0 = xs.head_size();
  const bool mass_before = n0 == 1 || W(w, n0 - 1).value.sign() > 0;
  out.conditions.push_back({"n0 = 1 or W(n0-1) > 0", mass_before});
  if (!mass_before) {
    out.failed = "W(n0-1)=0";
    out.index = n0;
    out.pair = swap_decomposition(w, x);
    return out;
  }
  out.result = true;
  out.index = n0;
  return out;
}

std::optional<std::pair<Sequence, Sequence>> extreme_midpoint_oracle(const WeightSpec &w, const Sequence &x,
                                                                     std::size_t n, std::size_t budget,
                                                                     std::uint64_t seed) {
  require_unit_p(w, "extreme_midpoint_oracle");
  if (n == 0 || n > 9)
    throw std::invalid_argument("extreme_midpoint_oracle: truncation must lie in [1, 9]");
  if (!x.has_zero_tail() || x.support_end() > n)
    throw std::invalid_argument("extreme_midpoint_oracle: x must be supported in [1, N]");
  require_gamma_sphere(w, x, "extreme_midpoint_oracle");

  std::vector<double> v(n), xd(n);
  {
    auto table = derived_v_table(w, n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = table[i].to_double();
      xd[i] = x.at(i + 1).to_double();
    }
  }

  // Gram matrix of the functionals active at x; its kernel is the common
  // kernel of the active set.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    double value = 0.0;
    std::vector<std::size_t> free_slots;
    for (std::size_t i = 0; i < n; ++i) {
      value += v[i] * std::fabs(xd[perm[i]]);
      if (xd[perm[i]] == 0.0)
        free_slots.push_back(i);
    }
    if (value < 1.0 - 1e-9)
      continue;
    const std::size_t combos = std::size_t{1} << free_slots.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      std::size_t bit = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = xd[perm[i]] > 0 ? 1.0 : -1.0;
        if (xd[perm[i]] == 0.0)
          s = ((mask >> bit++) & 1U) ? -1.0 : 1.0;
        f[static_cast<Eigen::Index>(perm[i])] = s * v[i];
      }
      gram += f * f.transpose();
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Eigen::VectorXd> directions;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (std::fabs(eig.eigenvalues()[i]) <= 1e-9 * scale)
      directions.push_back(eig.eigenvectors().col(i));
  for (std::size_t i = 0; i < n && directions.size() < budget; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    directions.push_back(e);
    for (std::size_t j = i + 1; j < n; ++j)
      for (double s : {1.0, -1.0}) {
        Eigen::VectorXd d = e;
        d[static_cast<Eigen::Index>(j)] = s;
        directions.push_back(d);
      }
  }

  // step: a quarter of the smallest gap between distinct magnitudes
  std::vector<double> mags;
  for (double e : xd)
    mags.push_back(std::fabs(e));
  std::sort(mags.begin(), mags.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < mags.size(); ++i)
    if (mags[i] > mags[i - 1])
      gap = std::min(gap, mags[i] - mags[i - 1]);
  for (double m : mags)
    if (m > 0)
      gap = std::min(gap, m);
  const double eps_base = 0.25 * gap;

  const Sequence xe = exactified(x);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto attempt = [&](const Eigen::VectorXd &d) -> std::optional<std::pair<Sequence, Sequence>> {
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(dmax > 0))
      return std::nullopt;
    const double eps = eps_base / dmax;
    std::vector<double> yp(n), ym(n);
    for (std::size_t i = 0; i < n; ++i) {
      yp[i] = xd[i] + eps * d[static_cast<Eigen::Index>(i)];
      ym[i] = xd[i] - eps * d[static_cast<Eigen::Index>(i)];
    }
    if (std::fabs(fast_norm(v, yp) - 1.0) > 1e-11 || std::fabs(fast_norm(v, ym) - 1.0) > 1e-11)
      return std::nullopt;
    std::vector<Scalar> delta(n);
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = Scalar::exact_from_double(eps * d[static_cast<Eigen::Index>(i)]);
      nonzero = nonzero || !delta[i].is_zero();
    }
    if (!nonzero)
      return std::nullopt;
    Sequence ds(delta);
    Sequence y = xe + ds, z = xe - ds;
    if (!is_one(norm_gamma(w, y)) || !is_one(norm_gamma(w, z)))
      return std::nullopt;
    return std::make_pair(std::move(y), std::move(z));
  };

  std::size_t tried = 0;
  for (const auto &d : directions) {
    if (tried++ >= budget)
      return std::nullopt;
    if (auto pair = attempt(d))
      return pair;
  }
  while (tried++ < budget) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < d.size(); ++i)
      d[i] = normal(rng);
    if (auto pair = attempt(d))
      return pair;
  }
  return std::nullopt;
}

Verdict classify_extreme_dual(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "classify_extreme_dual");
  require_m_psi_sphere(w, x, "classify_extreme_dual");
  Verdict out;
  const Sequence xs = rearrangement(x);
  if (!w.has_zero_tail()) {
    // v > 0 everywhere and is not of geometric form
    std::size_t first = xs.has_zero_tail() ? xs.head_size() + 1 : 1;
    const std::size_t len = xs.head_size() + 1;
    for (std::size_t n = 1; n <= len; ++n)
      if (!same(CertifiedValue(xs.at(n)), derived_v(w, n))) {
        first = n;
        break;
      }
    out.conditions.push_back({"x* = v", false});
    out.failed = "x* != v";
    out.index = first;
    return out;
  }
  const Sequence v = derived_v_sequence(w);
  bool equal = true;
  const std::size_t len = std::max(xs.head_size(), v.head_size()) + 1;
  for (std::size_t n = 1; n <= len && equal; ++n) {
    const Scalar a = xs.at(n), b = v.at(n);
    const bool hit = (a.is_exact() && b.is_exact()) ? a == b
                                                    : std::fabs(a.to_double() - b.to_double()) <= kSphereTolerance;
    if (!hit) {
      equal = false;
      out.index = n;
    }
  }
  equal = equal && xs.has_zero_tail();
  if (!equal && !out.index)
    out.index = len + 1;
  out.conditions.push_back({"x* = v", equal});
  out.result = equal;
  if (!equal)
    out.failed = "x* != v";
  return out;
}

Verdict classify_smooth_gamma1(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "classify_smooth_gamma1");
  require_gamma_sphere(w, x, "classify_smooth_gamma1");
  Verdict out;
  const Sequence xs = rearrangement(x);
  const std::size_t k = xs.head_size();
  const bool infinite_support = !xs.has_zero_tail();
  out.conditions.push_back({"card(supp x) = infinity", infinite_support});

  // Past the head x* is constant (zero or constant tail) or strictly
  // decreasing (geometric tail), so only finitely many n need checking.
  std::optional<std::size_t> violation;
  for (std::size_t n = 1; n <= k && !violation; ++n)
    if (w.at(n).sign() > 0 && !(xs.at(n) > xs.at(n + 1)))
      violation = n;
  if (!violation && !xs.has_geometric_tail()) {
    for (std::size_t n = k + 1; n <= std::max(k, w.head_size()) + 1; ++n)
      if (w.at(n).sign() > 0) {
        violation = n;
        break;
      }
  }
  out.conditions.push_back({"w(n) > 0 implies x*(n) > x*(n+1)", !violation});

  out.result = infinite_support && !violation;
  if (!infinite_support) {
    out.failed = "finite support";
  } else if (violation) {
    out.failed = "x*(n)=x*(n+1) with w(n)>0";
    out.index = violation;
  }
  return out;
}

Verdict classify_smooth_predual(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "classify_smooth_predual");
  require_infinite_W(w, "classify_smooth_predual");
  if (!in_m_psi0(w, x))
    throw SphereError("classify_smooth_predual: x is not in m_psi0");
  const SupResult s = norm_m_psi(w, x);
  if (!is_one(s.value))
    throw SphereError("classify_smooth_predual: x is not on the unit sphere of m_psi");
  Verdict out;
  const bool unique = s.attaining.size() == 1 && !s.attained_on_tail;
  out.conditions.push_back({"exactly one n with x**(n) psi(n) = 1", unique});
  out.result = unique;
  if (unique) {
    out.index = s.attained_at;
  } else {
    out.failed = "multiple attaining indices";
    if (s.attaining.size() > 1)
      out.index = s.attaining[1];
    else if (!s.attaining.empty())
      out.index = s.attaining.front() + 1;
  }
  return out;
}

Verdict classify_smooth_dual(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "classify_smooth_dual");
  require_infinite_W(w, "classify_smooth_dual");
  RearrangedSums rs(x);
  const Sequence &xs = rs.rearranged();
  if (xs.has_constant_tail())
    throw SphereError("classify_smooth_dual: x is not in m_psi");
  const SupResult s = norm_m_psi(w, x);
  if (!is_one(s.value))
    throw SphereError("classify_smooth_dual: x is not on the unit sphere of m_psi");

  Verdict out;
  if (!s.attained_at) {
    out.conditions.push_back({"supremum attained", false});
    out.failed = "supremum not attained";
    return out;
  }
  const std::size_t n0 = *s.attained_at;
  const CertifiedValue best = s.value;

  // sup over n != n0 of S(n)/phi(n): the head indices, then the tail, where the
  // ratio is capped by T/phi(n + 1)
  const std::size_t k = rs.head_size();
  CertifiedValue running(0);
  std::optional<CertifiedValue> others;
  auto offer = [&](const CertifiedValue &c) {
    if (!others || c.value > others->value)
      others = c;
  };
  CertifiedValue f = phi(w, 1);
  const bool geometric = xs.has_geometric_tail();
  Scalar total = rs.head_total();
  if (geometric) {
    const auto &g = std::get<GeometricTail>(xs.tail());
    total = total + g.a * g.r / (Scalar(1) - g.r);
  }
  for (std::size_t n = 1;; ++n) {
    const CertifiedValue ratio = CertifiedValue(rs.sum_first(n)) / f;
    if (n != n0)
      offer(ratio);
    const CertifiedValue f_next = phi(w, n + 1);
    if (!geometric && n >= std::max(k, n0) + 1)
      break;
    if (geometric && n >= std::max(k, n0)) {
      const CertifiedValue cap = CertifiedValue(total) / f_next;
      if ((others && cap.upper() <= others->lower()) || n >= 2000) {
        if (n >= 2000)
          offer(cap);
        break;
      }
    }
    f = f_next;
  }
  const CertifiedValue gap = best - *others;
  out.gap = gap;
  const bool strict = gap.exact() ? gap.value.sign() > 0 : gap.lower() > 1e-12;
  out.conditions.push_back({"unique attaining index n0", s.attaining.size() == 1 && !s.attained_on_tail});
  out.conditions.push_back({"strict gap", strict});
  out.result = strict;
  out.index = n0;
  if (!strict)
    out.failed = "no strict gap";
  return out;
}

Sequence norming_functional(const WeightSpec &w, const Sequence &x, TieBreak ties) {
  require_unit_p(w, "norming_functional");
  if (!x.has_zero_tail())
    throw std::invalid_argument("norming_functional: x must be finitely supported");
  if (x.is_zero())
    throw std::invalid_argument("norming_functional: x = 0");
  std::size_t count = 0;
  for (const auto &e : x.head())
    if (!e.is_zero())
      ++count;
  const std::vector<std::size_t> pos = rank_positions(x, count, ties);
  const std::vector<CertifiedValue> v = derived_v_table(w, count);
  std::vector<Scalar> y(x.support_end(), Scalar(0));
  for (std::size_t k = 0; k < count; ++k) {
    const Scalar &vk = v[k].value;
    y[pos[k] - 1] = x.at(pos[k]).sign() < 0 ? -vk : vk;
  }
  return Sequence(std::move(y));
}

NormingElement norming_element(const WeightSpec &w, const Sequence &y, std::optional<std::size_t> m) {
  require_unit_p(w, "norming_element");
  if (rearrangement(y).is_zero())
    throw std::invalid_argument("norming_element: y = 0");
  std::size_t index = 0;
  if (m) {
    if (*m == 0)
      throw std::invalid_argument("norming_element: m must be positive");
    index = *m;
  } else {
    const SupResult s = norm_m_psi(w, y);
    if (!s.attained_at)
      throw std::invalid_argument("norming_element: supremum not attained; supply m");
    index = *s.attained_at;
  }
  const CertifiedValue f = phi(w, index);
  const Scalar unit = f.exact() ? Scalar(1) / f.value : Scalar::from_double(1.0 / f.to_double());
  const std::vector<std::size_t> pos = rank_positions(y, index);
  std::vector<Scalar> x(*std::max_element(pos.begin(), pos.end()), Scalar(0));
  for (auto p : pos)
    x[p - 1] = y.at(p).sign() < 0 ? -unit : unit;
  RearrangedSums rs(y);
  return {Sequence(std::move(x)), index, CertifiedValue(rs.sum_first(index)) / f};
}

std::string to_string(CounterexampleKind kind) {
  switch (kind) {
  case CounterexampleKind::oc_failure:
    return "OC_failure";
  case CounterexampleKind::sm_failure:
    return "SM_failure";
  case CounterexampleKind::sc_p1:
    return "SC_p1";
  case CounterexampleKind::sc_winf:
    return "SC_Winf";
  case CounterexampleKind::sc_zero_weight_n0_1:
    return "SC_zero_weight_n0_1";
  case CounterexampleKind::sc_zero_weight_n0_gt1:
    return "SC_zero_weight_n0_gt1";
  }
  throw std::logic_error("unknown counterexample kind");
}

CounterexampleKind counterexample_kind(const std::string &name) {
  for (auto k : {CounterexampleKind::oc_failure, CounterexampleKind::sm_failure, CounterexampleKind::sc_p1,
                 CounterexampleKind::sc_winf, CounterexampleKind::sc_zero_weight_n0_1,
                 CounterexampleKind::sc_zero_weight_n0_gt1})
    if (to_string(k) == name)
      return k;
  throw std::invalid_argument("unknown counterexample kind: " + name);
}

namespace {

CheckedIdentity identity(std::string name, const CertifiedValue &lhs, const CertifiedValue &rhs) {
  CheckedIdentity c{std::move(name), lhs, rhs, same(lhs, rhs), lhs.exact() && rhs.exact()};
  return c;
}

CheckedIdentity flag(std::string name, bool holds) {
  return {std::move(name), CertifiedValue(holds ? 1 : 0), CertifiedValue(1), holds, true};
}

Scalar reciprocal(const CertifiedValue &v) {
  return v.exact() ? Scalar(1) / v.value : Scalar::from_double(1.0 / v.to_double());
}

Sequence constant_from(std::size_t start, const Scalar &c) {
  return Sequence(std::vector<Scalar>(start - 1, Scalar(0)), ConstantTail{c});
}

void add_unit_pair_checks(CounterexampleBundle &b, const WeightSpec &w, const Sequence &x, const Sequence &y) {
  b.checks.push_back(identity("||x|| = 1", norm_gamma(w, x), CertifiedValue(1)));
  b.checks.push_back(identity("||y|| = 1", norm_gamma(w, y), CertifiedValue(1)));
  b.checks.push_back(identity("||x + y|| = 2", norm_gamma(w, x + y), CertifiedValue(2)));
  b.checks.push_back(flag("x != y", !(x == y)));
}

} // namespace

CounterexampleBundle counterexample(CounterexampleKind kind, const WeightSpec &w, std::optional<Scalar> epsilon) {
  CounterexampleBundle b{kind, {}, {}, false};
  const WInfinity wi = W_inf_class(w);
  const std::string name = to_string(kind);
  auto need_finite_W = [&] {
    if (wi.infinite)
      throw RegimeError(name + ": requires W(infinity) < infinity");
  };

  switch (kind) {
  case CounterexampleKind::oc_failure: {
    need_finite_W();
    const CertifiedValue target = root(wi.value, w.p());
    b.sequences.emplace_back("x", constant_from(1, Scalar(1)));
    b.checks.push_back(identity("||chi_N|| = W(inf)^(1/p)", norm_gamma(w, b.sequences.back().second), target));
    for (std::size_t m : {2, 3, 5, 10}) {
      Sequence xm = constant_from(m, Scalar(1));
      b.checks.push_back(identity("||x_" + std::to_string(m) + "|| = W(inf)^(1/p)", norm_gamma(w, xm), target));
      b.sequences.emplace_back("x_" + std::to_string(m), std::move(xm));
    }
    break;
  }
  case CounterexampleKind::sm_failure: {
    need_finite_W();
    Sequence x = constant_from(2, Scalar(1)), y = constant_from(1, Scalar(1));
    const CertifiedValue nx = norm_gamma(w, x), ny = norm_gamma(w, y);
    b.checks.push_back(identity("||x|| = ||y||", nx, ny));
    b.checks.push_back(identity("||y|| = W(inf)^(1/p)", ny, root(wi.value, w.p())));
    b.checks.push_back(flag("0 <= x <= y", x.at(1) <= y.at(1) && x.at(1).sign() >= 0));
    b.checks.push_back(flag("x != y", !(x == y)));
    b.sequences.emplace_back("x", std::move(x));
    b.sequences.emplace_back("y", std::move(y));
    break;
  }
  case CounterexampleKind::sc_p1: {
    if (w.p() != 1.0)
      throw RegimeError(name + ": requires p = 1");
    Sequence x({reciprocal(phi(w, 1))});
    const Scalar c2 = reciprocal(phi(w, 2));
    Sequence y({c2, c2});
    add_unit_pair_checks(b, w, x, y);
    b.sequences.emplace_back("x", std::move(x));
    b.sequences.emplace_back("y", std::move(y));
    break;
  }
  case CounterexampleKind::sc_winf: {
    need_finite_W();
    // x = c chi of the even integers is carried through its rearrangement c chi_N
    const Scalar c = reciprocal(root(wi.value, w.p()));
    Sequence xs({}, ConstantTail{c}), y({}, ConstantTail{c}), sum({}, ConstantTail{c * Scalar(2)});
    b.checks.push_back(identity("||x|| = 1", norm_gamma(w, xs), CertifiedValue(1)));
    b.checks.push_back(identity("||y|| = 1", norm_gamma(w, y), CertifiedValue(1)));
    b.checks.push_back(identity("||x + y|| = 2", norm_gamma(w, sum), CertifiedValue(2)));
    b.checks.push_back(flag("x != y", true));
    b.sequences.emplace_back("x_rearranged", std::move(xs));
    b.sequences.emplace_back("y", std::move(y));
    b.sequences.emplace_back("x_plus_y_rearranged", std::move(sum));
    break;
  }
  case CounterexampleKind::sc_zero_weight_n0_1: {
    if (!w.at(1).is_zero())
      throw RegimeError(name + ": requires w(1) = 0");
    const Scalar c = reciprocal(phi(w, 2));
    const Scalar eps = epsilon ? *epsilon : c / Scalar(2);
    if (!(eps.sign() > 0) || !(eps < c))
      throw std::invalid_argument(name + ": epsilon must lie in (0, 1/phi(2))");
    Sequence x({c, c}), y({c + eps, c - eps});
    add_unit_pair_checks(b, w, x, y);
    b.sequences.emplace_back("x", std::move(x));
    b.sequences.emplace_back("y", std::move(y));
    break;
  }
  case CounterexampleKind::sc_zero_weight_n0_gt1: {
    std::optional<std::size_t> n0;
    for (std::size_t n = 2; n <= w.head_size() && !n0; ++n)
      if (w.at(n).is_zero())
        n0 = n;
    if (!n0 && w.has_zero_tail())
      n0 = std::max<std::size_t>(w.head_size() + 1, 2);
    if (!n0)
      throw RegimeError(name + ": requires w(n0) = 0 for some n0 > 1");
    const Scalar c = reciprocal(phi(w, *n0));
    std::vector<Scalar> xh(*n0, c), yh(*n0 + 1, c);
    yh[*n0 - 1] = c / Scalar(2);
    yh[*n0] = c / Scalar(2);
    Sequence x(std::move(xh)), y(std::move(yh));
    add_unit_pair_checks(b, w, x, y);
    b.checks.push_back(flag("n0 = " + std::to_string(*n0), true));
    b.sequences.emplace_back("x", std::move(x));
    b.sequences.emplace_back("y", std::move(y));
    break;
  }
  }
  b.verified = std::all_of(b.checks.begin(), b.checks.end(), [](const CheckedIdentity &c) { return c.holds; });
  return b;
}

std::vector<Scalar> ExtremePoint::coordinates() const {
  std::vector<Scalar> out;
  out.reserve(signs.size());
  for (int s : signs)
    out.push_back(s == 0 ? Scalar(0) : (s < 0 ? -scale : scale));
  return out;
}

Sequence ExtremePoint::sequence() const { return Sequence(coordinates()); }

namespace {

std::vector<std::size_t> admissible_lengths(const WeightSpec &w, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t n0 = 1; n0 <= n; ++n0)
    if (n0 == 1 || W(w, n0 - 1).value.sign() > 0)
      out.push_back(n0);
  return out;
}

void check_enumeration(const WeightSpec &w, std::size_t n, const char *what) {
  require_unit_p(w, what);
  require_infinite_W(w, what);
  if (n == 0 || n > 12)
    throw std::invalid_argument(std::string(what) + ": N must lie in [1, 12]");
}

} // namespace

void for_each_extreme_point(const WeightSpec &w, std::size_t n,
                            const std::function<void(const ExtremePoint &)> &visit) {
  check_enumeration(w, n, "for_each_extreme_point");
  for (std::size_t n0 : admissible_lengths(w, n)) {
    ExtremePoint e;
    e.n0 = n0;
    e.scale = reciprocal(phi(w, n0));
    e.signs.assign(n, 0);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n0)
        continue;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1U)
          members.push_back(i);
      for (std::uint32_t s = 0; s < (1U << n0); ++s) {
        std::fill(e.signs.begin(), e.signs.end(), 0);
        for (std::size_t j = 0; j < n0; ++j)
          e.signs[members[j]] = ((s >> j) & 1U) ? -1 : 1;
        visit(e);
      }
    }
  }
}

std::vector<ExtremePoint> enumerate_extreme_points(const WeightSpec &w, std::size_t n) {
  std::vector<ExtremePoint> out;
  out.reserve(extreme_point_count(w, n));
  for_each_extreme_point(w, n, [&](const ExtremePoint &e) { out.push_back(e); });
  return out;
}

std::size_t extreme_point_count(const WeightSpec &w, std::size_t n) {
  check_enumeration(w, n, "extreme_point_count");
  std::size_t total = 0;
  for (std::size_t n0 : admissible_lengths(w, n)) {
    std::size_t c = 1;
    for (std::size_t j = 0; j < n0; ++j)
      c = c * (n - j) / (j + 1);
    total += c << n0;
  }
  return total;
}

} // namespace lorentz
