#include "lorentz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lorentz/rearrangement.hpp"

namespace lorentz {

namespace {

constexpr std::size_t kHorizon = 100000;
constexpr double kRelativeCut = 1e-17;

// Sums exact terms exactly and float terms in double, tracking the radius.
class Accumulator {
public:
  void add(const Scalar &v) {
    if (v.is_exact()) {
      exact_ += v;
      return;
    }
    const double d = v.to_double();
    flt_ += d;
    magnitude_ += std::fabs(d);
    ++ops_;
  }
  void add(const CertifiedValue &v) {
    if (v.is_infinite()) {
      infinite_ = true;
      return;
    }
    add(v.value);
    error_ += v.error;
  }
  void add_error(double e) { error_ += e; }

  double approx() const { return exact_.to_double() + flt_; }

  CertifiedValue result() const {
    if (infinite_)
      return CertifiedValue::infinity();
    if (ops_ == 0)
      return {exact_, error_};
    const double v = approx();
    return {Scalar::from_double(v),
            error_ + rounding_allowance(magnitude_ + std::fabs(v), 4.0 + static_cast<double>(ops_))};
  }

private:
  Scalar exact_;
  double flt_ = 0.0;
  double magnitude_ = 0.0;
  double error_ = 0.0;
  std::size_t ops_ = 0;
  bool infinite_ = false;
};

// phi(1), phi(2), ... without re-summing W each time.
class PhiStream {
public:
  explicit PhiStream(const WeightSpec &w) : w_(w) {}

  std::size_t index() const { return n_; }

  CertifiedValue next() {
    ++n_;
    running_ = running_ + CertifiedValue(w_.at(n_));
    return root(running_ + Wp(w_, n_), w_.p());
  }

private:
  const WeightSpec &w_;
  std::size_t n_ = 0;
  CertifiedValue running_{0};
};

// Largest index with a positive weight, or 0 when the tail is positive.
std::size_t weight_support_end(const WeightSpec &w) {
  if (!w.has_zero_tail())
    return 0;
  std::size_t end = w.head_size();
  while (end > 0 && w.head()[end - 1].is_zero())
    --end;
  return end;
}

// sum_{i<=n} x*(i), exact except for long geometric stretches.
CertifiedValue partial_sum(const RearrangedSums &rs, std::size_t n) {
  const std::size_t k = rs.head_size();
  const auto *g = std::get_if<GeometricTail>(&rs.rearranged().tail());
  if (n <= k || !g || (n - k <= 64 && g->a.is_exact() && g->r.is_exact()))
    return CertifiedValue(rs.sum_first(n));
  const double a = g->a.to_double(), r = g->r.to_double();
  const double tail = a * r * (1.0 - std::pow(r, static_cast<double>(n - k))) / (1.0 - r);
  const double v = rs.head_total().to_double() + tail;
  return {Scalar::from_double(v), rounding_allowance(v, 64.0)};
}

// T = sum_i x*(i) for a geometric tail.
CertifiedValue geometric_total(const RearrangedSums &rs) {
  const auto &g = std::get<GeometricTail>(rs.rearranged().tail());
  Scalar t = rs.head_total() + g.a * g.r / (Scalar(1) - g.r);
  return {t, t.is_exact() ? 0.0 : rounding_allowance(t.to_double(), 8.0)};
}

Scalar binomial(double p, unsigned k) {
  if (is_integral_exponent(p) || p == 0.0) {
    Rational b(1);
    for (unsigned j = 0; j < k; ++j)
      b = b * Rational(static_cast<long>(p) - static_cast<long>(j)) / Rational(static_cast<long>(j + 1));
    return Scalar(b);
  }
  double b = 1.0;
  for (unsigned j = 0; j < k; ++j)
    b *= (p - j) / (j + 1);
  return Scalar::from_double(b);
}

// sum_{n > K} (c + d/n)^p w(n) for a constant plateau c > 0, W(infinity) < infinity.
void add_constant_plateau(Accumulator &acc, const WeightSpec &w, std::size_t k, const Scalar &c,
                          const Scalar &d) {
  const double p = w.p();
  if (w.has_zero_tail()) {
    for (std::size_t n = k + 1; n <= w.head_size(); ++n)
      acc.add(power(c + d / Scalar(static_cast<unsigned long>(n)), p) * w.at(n));
    return;
  }
  if (is_integral_exponent(p)) {
    const auto top = static_cast<unsigned>(p);
    for (unsigned j = 0; j <= top; ++j) {
      if (j > 0 && d.is_zero())
        break;
      Scalar coeff = binomial(p, j) * pow_int(c, top - j) * pow_int(d, j);
      acc.add(CertifiedValue(coeff) * w.tail_sum(k, static_cast<double>(j)));
    }
    return;
  }
  // (c + d/n)^p = c^p (1 + t)^p with t = d/(c n); expand once t is small
  const double cd = c.to_double(), dd = d.to_double();
  std::size_t start = k;
  if (dd > 1e-3 * cd * static_cast<double>(k + 1)) {
    const double want = std::ceil(1e3 * dd / cd);
    start = std::min<std::size_t>(k + 1000000, static_cast<std::size_t>(want));
    for (std::size_t n = k + 1; n <= start; ++n)
      acc.add(Scalar::from_double(std::pow(cd + dd / static_cast<double>(n), p) * w.at(n).to_double()));
  }
  const unsigned order = static_cast<unsigned>(std::ceil(p)) + 6;
  const double cp = std::pow(cd, p), ratio = dd / cd;
  for (unsigned j = 0; j <= order; ++j)
    acc.add(CertifiedValue(Scalar::from_double(cp * binomial(p, j).to_double() * std::pow(ratio, j))) *
            w.tail_sum(start, static_cast<double>(j)));
  // Lagrange remainder: order + 1 > p so (1 + xi)^{p - order - 1} <= 1
  acc.add_error(cp * std::fabs(binomial(p, order + 1).to_double()) * std::pow(ratio, order + 1) *
                w.tail_sum(start, static_cast<double>(order + 1)).upper());
}

// sum_{n > K} (S(n)/n)^p w(n) for a geometric tail of x*.
void add_geometric_profile(Accumulator &acc, const WeightSpec &w, const RearrangedSums &rs) {
  const std::size_t k = rs.head_size();
  const double p = w.p();
  const auto &g = std::get<GeometricTail>(rs.rearranged().tail());
  const std::size_t support = weight_support_end(w);
  if (w.has_zero_tail()) {
    for (std::size_t n = k + 1; n <= support; ++n) {
      if (w.at(n).is_zero())
        continue;
      acc.add(CertifiedValue(power(partial_sum(rs, n).value / Scalar(static_cast<unsigned long>(n)), p) *
                             w.at(n)));
    }
    return;
  }
  const double r = g.r.to_double();
  const double total = geometric_total(rs).to_double();
  double s = rs.head_total().to_double();
  double term = g.a.to_double();
  for (std::size_t n = k + 1;; ++n) {
    term *= r;
    s += term;
    acc.add(Scalar::from_double(std::pow(s / static_cast<double>(n), p) * w.at(n).to_double()));
    if (n % 8 != 0 && n - k < kHorizon)
      continue;
    CertifiedValue rest = w.tail_sum(n, p);
    const double lo = std::pow(s, p), hi = std::pow(total, p);
    const double width = (hi - lo) * rest.to_double();
    if (width <= kRelativeCut * acc.approx() || n - k >= kHorizon) {
      // S(m) lies in [S(n), T] for every m > n
      acc.add(Scalar::from_double(0.5 * (lo + hi) * rest.to_double()));
      acc.add_error(0.5 * width + hi * rest.error + rounding_allowance(hi * rest.to_double(), 64.0) +
                    rounding_allowance(hi * rest.to_double(), static_cast<double>(n - k)));
      return;
    }
  }
}

// Runs over a sequence of candidate values, collecting the maximum and the
// indices that attain it.
class SupTracker {
public:
  void offer(std::size_t n, const CertifiedValue &v) {
    if (values_.empty() || v.value > values_[best_].second.value)
      best_ = values_.size();
    values_.emplace_back(n, v);
  }

  const CertifiedValue *best() const { return values_.empty() ? nullptr : &values_[best_].second; }

  SupResult finish() const {
    SupResult out;
    const CertifiedValue *b = best();
    if (!b)
      return out;
    out.value = *b;
    for (const auto &[n, v] : values_) {
      const bool attains = (b->exact() && v.exact()) ? v.value == b->value : v.upper() >= b->lower();
      if (attains)
        out.attaining.push_back(n);
    }
    if (!out.attaining.empty())
      out.attained_at = out.attaining.front();
    return out;
  }

private:
  std::vector<std::pair<std::size_t, CertifiedValue>> values_;
  std::size_t best_ = 0;
};

void require_unit_p(const WeightSpec &w, const char *what) {
  if (w.p() != 1.0)
    throw std::domain_error(std::string(what) + ": requires p = 1");
}

// Apply a limit value that the tail of the index range approaches without
// reaching: it joins the supremum when it is not beaten by an attained value.
void merge_limit(SupResult &out, const CertifiedValue &limit, const CertifiedValue &upper) {
  if (out.attaining.empty()) {
    out.value = limit;
    return;
  }
  const CertifiedValue &b = out.value;
  if (b.exact() && limit.exact() && upper.exact()) {
    if (limit.value > b.value) {
      out.value = limit;
      out.attaining.clear();
      out.attained_at.reset();
    }
    return;
  }
  if (upper.upper() < b.lower())
    return;
  // the tail may reach past the attained values: report the enclosing interval
  const double lo = std::max(b.lower(), limit.lower());
  const double hi = std::max(b.upper(), upper.upper());
  out.value = {Scalar::from_double(0.5 * (lo + hi)), 0.5 * (hi - lo)};
  if (limit.lower() > b.upper()) {
    out.attaining.clear();
    out.attained_at.reset();
  }
}

} // namespace

CertifiedValue norm_gamma(const WeightSpec &w, const Sequence &x) {
  RearrangedSums rs(x);
  const Sequence &xs = rs.rearranged();
  const std::size_t k = rs.head_size();
  const double p = w.p();
  if (xs.has_zero_tail() && k == 0)
    return CertifiedValue(0);

  Accumulator acc;
  for (std::size_t n = 1; n <= k; ++n) {
    Scalar wn = w.at(n);
    if (!wn.is_zero())
      acc.add(power(rs.maximal(n), p) * wn);
  }

  if (xs.has_zero_tail()) {
    CertifiedValue rest = w.tail_sum(k, p);
    if (!(rest.exact() && rest.value.is_zero()))
      acc.add(CertifiedValue(power(rs.head_total(), p)) * rest);
  } else if (const auto *c = std::get_if<ConstantTail>(&xs.tail())) {
    if (W_inf_class(w).infinite)
      return CertifiedValue::infinity();
    add_constant_plateau(acc, w, k, c->c, rs.head_total() - c->c * Scalar(static_cast<unsigned long>(k)));
  } else {
    add_geometric_profile(acc, w, rs);
  }
  return root(acc.result(), p);
}

CertifiedValue norm_d1(const WeightSpec &u, const Sequence &x) {
  RearrangedSums rs(x);
  const Sequence &xs = rs.rearranged();
  const std::size_t k = rs.head_size();
  Accumulator acc;
  for (std::size_t n = 1; n <= k; ++n)
    acc.add(xs.at(n) * u.at(n));

  if (const auto *c = std::get_if<ConstantTail>(&xs.tail())) {
    acc.add(CertifiedValue(c->c) * u.tail_sum(k, 0.0));
  } else if (const auto *g = std::get_if<GeometricTail>(&xs.tail())) {
    if (u.has_zero_tail()) {
      for (std::size_t n = k + 1; n <= u.head_size(); ++n)
        acc.add(xs.at(n) * u.at(n));
    } else {
      const double r = g->r.to_double();
      double term = g->a.to_double();
      for (std::size_t n = k + 1;; ++n) {
        term *= r;
        acc.add(Scalar::from_double(term * u.at(n).to_double()));
        const double rest = u.sup_after(n).to_double() * term * r / (1.0 - r);
        if (rest <= kRelativeCut * acc.approx() || n - k >= kHorizon) {
          acc.add_error(rest);
          break;
        }
      }
    }
  }
  return acc.result();
}

CertifiedValue norm_d1_derived(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "norm_d1_derived");
  RearrangedSums rs(x);
  const Sequence &xs = rs.rearranged();
  const std::size_t k = rs.head_size();
  Accumulator acc;
  std::vector<CertifiedValue> v = derived_v_table(w, k);
  for (std::size_t n = 1; n <= k; ++n)
    acc.add(CertifiedValue(xs.at(n)) * v[n - 1]);

  if (const auto *c = std::get_if<ConstantTail>(&xs.tail())) {
    if (W_inf_class(w).infinite)
      return CertifiedValue::infinity();
    // sum_{n>K} v(n) = sum_{k>K} w(k) (k - K) / k
    CertifiedValue rest = w.tail_sum(k, 0.0) -
                          CertifiedValue(Scalar(static_cast<unsigned long>(k))) * w.tail_sum(k, 1.0);
    acc.add(CertifiedValue(c->c) * rest);
  } else if (const auto *g = std::get_if<GeometricTail>(&xs.tail())) {
    if (w.has_zero_tail()) {
      std::vector<CertifiedValue> vv = derived_v_table(w, std::max(k, w.head_size()));
      for (std::size_t n = k + 1; n <= w.head_size(); ++n)
        acc.add(CertifiedValue(xs.at(n)) * vv[n - 1]);
    } else {
      const double r = g->r.to_double();
      double term = g->a.to_double();
      CertifiedValue vn = w.tail_sum(k, 1.0); // v(k + 1)
      for (std::size_t n = k + 1;; ++n) {
        term *= r;
        acc.add(CertifiedValue(Scalar::from_double(term)) * vn);
        vn = vn - CertifiedValue(w.at(n) / Scalar(static_cast<unsigned long>(n)));
        // v is nonincreasing, so v(n + 1) bounds every later weight
        const double rest = vn.upper() * term * r / (1.0 - r);
        if (rest <= kRelativeCut * acc.approx() || n - k >= kHorizon) {
          acc.add_error(rest);
          break;
        }
      }
    }
  }
  return acc.result();
}

SupResult norm_m_psi(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "norm_m_psi");
  RearrangedSums rs(x);
  const Sequence &xs = rs.rearranged();
  const std::size_t k = rs.head_size();
  if (xs.has_constant_tail())
    throw std::domain_error("norm_m_psi: a positive constant tail has infinite m_psi norm");

  if (xs.has_zero_tail() && k == 0) {
    SupResult out;
    out.value = CertifiedValue(0);
    out.attained_at = 1;
    out.attaining = {1};
    out.attained_on_tail = true;
    return out;
  }

  SupTracker tracker;
  PhiStream phis(w);

  if (xs.has_zero_tail()) {
    // For n >= K the numerator is frozen at the total while phi(n) does not
    // decrease, so the ratio can only fall: indices 1..K decide the supremum.
    for (std::size_t n = 1; n <= k; ++n)
      tracker.offer(n, CertifiedValue(rs.sum_first(n)) / phis.next());
    SupResult out = tracker.finish();
    CertifiedValue rest = w.tail_sum(k, 1.0);
    out.attained_on_tail = !out.attaining.empty() && out.attaining.back() == k && rest.exact() &&
                           rest.value.is_zero();
    return out;
  }

  const CertifiedValue total = geometric_total(rs);
  const std::size_t support = weight_support_end(w);
  if (w.has_zero_tail()) {
    // phi is frozen from the last positive weight on, where the ratio climbs
    // towards T / phi(support) without reaching it
    const std::size_t last = std::max<std::size_t>(support, 1);
    CertifiedValue f;
    for (std::size_t n = 1; n <= last; ++n) {
      f = phis.next();
      if (n < last)
        tracker.offer(n, partial_sum(rs, n) / f);
    }
    SupResult out = tracker.finish();
    CertifiedValue limit = total / f;
    merge_limit(out, limit, limit);
    return out;
  }

  // partial sums never exceed T, so T / phi(n + 1) caps every later ratio
  CertifiedValue f = phis.next();
  for (std::size_t n = 1;; ++n) {
    tracker.offer(n, partial_sum(rs, n) / f);
    CertifiedValue f_next = phis.next();
    const CertifiedValue cap = total / f_next;
    if (n >= k && cap.upper() <= tracker.best()->lower())
      return tracker.finish();
    if (n >= kHorizon) {
      SupResult out = tracker.finish();
      WInfinity wi = W_inf_class(w);
      CertifiedValue limit =
          wi.infinite ? CertifiedValue(0) : total / root(wi.value, 1.0);
      merge_limit(out, limit, cap);
      return out;
    }
    f = f_next;
  }
}

SupResult norm_m_phi(const WeightSpec &w, const Sequence &x) {
  RearrangedSums rs(x);
  const Sequence &xs = rs.rearranged();
  const std::size_t k = rs.head_size();
  SupTracker tracker;
  PhiStream phis(w);

  if (xs.has_zero_tail()) {
    if (k == 0) {
      SupResult out;
      out.value = CertifiedValue(0);
      out.attained_at = 1;
      out.attaining = {1};
      out.attained_on_tail = true;
      return out;
    }
    // phi(n)/n is nonincreasing, so past K the objective S_K phi(n)/n falls
    for (std::size_t n = 1; n <= k + 1; ++n)
      tracker.offer(n, CertifiedValue(rs.sum_first(n) / Scalar(static_cast<unsigned long>(n))) * phis.next());
    return tracker.finish();
  }

  WInfinity wi = W_inf_class(w);
  if (const auto *c = std::get_if<ConstantTail>(&xs.tail())) {
    if (wi.infinite)
      return SupResult{CertifiedValue::infinity(), std::nullopt, {}, false};
    // x** decreases to c and phi increases to phi(infinity)
    const CertifiedValue phi_inf = root(wi.value, w.p());
    for (std::size_t n = 1;; ++n) {
      CertifiedValue m(rs.sum_first(n) / Scalar(static_cast<unsigned long>(n)));
      tracker.offer(n, m * phis.next());
      const CertifiedValue cap = m * phi_inf;
      if (cap.upper() <= tracker.best()->lower() && n > k)
        return tracker.finish();
      if (n >= kHorizon) {
        SupResult out = tracker.finish();
        merge_limit(out, CertifiedValue(c->c) * phi_inf, cap);
        return out;
      }
    }
  }

  const CertifiedValue total = geometric_total(rs);
  for (std::size_t n = 1;; ++n) {
    const CertifiedValue f = phis.next();
    const CertifiedValue nn(Scalar(static_cast<unsigned long>(n)));
    tracker.offer(n, partial_sum(rs, n) / nn * f);
    // for m > n: S(m) phi(m)/m <= T phi(n)/n
    const CertifiedValue cap = total * f / nn;
    if (n >= k && cap.upper() <= tracker.best()->lower())
      return tracker.finish();
    if (n >= kHorizon) {
      SupResult out = tracker.finish();
      merge_limit(out, CertifiedValue(0), cap);
      return out;
    }
  }
}

bool in_m_psi0(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "in_m_psi0");
  const Sequence xs = rearrangement(x);
  if (xs.has_zero_tail() && xs.head_size() == 0)
    return true;
  // a positive plateau makes the partial sums grow linearly, faster than phi
  if (xs.has_constant_tail())
    return false;
  // partial sums are bounded; the ratio vanishes iff phi is unbounded
  return W_inf_class(w).infinite;
}

CertifiedValue pairing(const Sequence &x, const Sequence &y) {
  const std::size_t len = std::max(x.head_size(), y.head_size());
  const Sequence xm = x.materialized(len), ym = y.materialized(len);
  Accumulator acc;
  for (std::size_t i = 0; i < len; ++i)
    acc.add(xm.head()[i] * ym.head()[i]);

  const TailClass &tx = xm.tail(), &ty = ym.tail();
  if (xm.has_zero_tail() || ym.has_zero_tail())
    return acc.result();
  const Scalar one(1);
  const auto *cx = std::get_if<ConstantTail>(&tx);
  const auto *cy = std::get_if<ConstantTail>(&ty);
  const auto *gx = std::get_if<GeometricTail>(&tx);
  const auto *gy = std::get_if<GeometricTail>(&ty);
  if (cx && cy)
    throw std::domain_error("pairing: two positive constant tails do not converge");
  if (gx && gy) {
    const Scalar q = gx->r * gy->r;
    acc.add(gx->a * gy->a * q / (one - q));
  } else {
    const Scalar &c = cx ? cx->c : cy->c;
    const GeometricTail &g = gx ? *gx : *gy;
    acc.add(c * g.a * g.r / (one - g.r));
  }
  return acc.result();
}

CertifiedValue hardy_littlewood_gap(const Sequence &x, const Sequence &y) {
  return pairing(rearrangement(x), rearrangement(y)) - pairing(x.abs(), y.abs());
}

CertifiedValue isometry_residual(const WeightSpec &w, const Sequence &x) {
  require_unit_p(w, "isometry_residual");
  CertifiedValue g = norm_gamma(w, x), d = norm_d1_derived(w, x);
  if (g.is_infinite() && d.is_infinite())
    return CertifiedValue(0);
  if (g.is_infinite() || d.is_infinite())
    return CertifiedValue::infinity();
  return abs(g - d);
}

CertifiedValue embedding_gap(const WeightSpec &w, const Sequence &x) {
  CertifiedValue g = norm_gamma(w, x);
  if (g.is_infinite())
    throw std::domain_error("embedding_gap: the norm is infinite");
  return g - norm_m_phi(w, x).value;
}

} // namespace lorentz
