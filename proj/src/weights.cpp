#include "lorentz/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lorentz/series.hpp"

namespace lorentz {

namespace {

void require_unit_p(const WeightSpec &w, const char *what) {
  if (w.p() != 1.0)
    throw std::domain_error(std::string(what) + ": requires p = 1");
}

} // namespace

WeightSpec::WeightSpec(std::vector<Scalar> head, WeightTail tail, double p)
    : head_(std::move(head)), tail_(std::move(tail)), p_(p) {
  if (!(p_ > 0.0) || !std::isfinite(p_))
    throw std::invalid_argument("WeightSpec: p must be a positive finite number");
  bool positive = false;
  for (const auto &v : head_) {
    if (v.is_infinite() || std::isnan(v.to_double()))
      throw std::invalid_argument("WeightSpec: weights must be finite");
    if (v.sign() < 0)
      throw std::invalid_argument("WeightSpec: weights must be nonnegative");
    positive = positive || v.sign() > 0;
  }
  if (const auto *pl = std::get_if<PowerLawTail>(&tail_)) {
    if (!(pl->c.sign() > 0) || pl->c.is_infinite())
      throw std::invalid_argument("WeightSpec: power-law coefficient must be positive");
    if (!(pl->alpha >= 0.0) || !std::isfinite(pl->alpha))
      throw std::invalid_argument("WeightSpec: power-law exponent must be nonnegative");
    if (!(pl->alpha + p_ > 1.0))
      throw std::invalid_argument("WeightSpec: power-law tail needs alpha + p > 1");
    positive = true;
  } else if (const auto *g = std::get_if<GeometricWeightTail>(&tail_)) {
    if (!(g->a.sign() > 0) || g->a.is_infinite())
      throw std::invalid_argument("WeightSpec: geometric amplitude must be positive");
    if (!(g->r.sign() > 0) || !(g->r < Scalar(1)))
      throw std::invalid_argument("WeightSpec: geometric ratio must lie in (0, 1)");
    positive = true;
  }
  if (!positive)
    throw std::invalid_argument("WeightSpec: weight sequence is identically zero");
}

WeightSpec WeightSpec::power_law(Scalar c, double alpha, double p, std::vector<Scalar> head) {
  return WeightSpec(std::move(head), PowerLawTail{std::move(c), alpha}, p);
}

Scalar WeightSpec::at(std::size_t i) const {
  if (i == 0)
    throw std::out_of_range("WeightSpec::at: indices start at 1");
  if (i <= head_.size())
    return head_[i - 1];
  if (const auto *pl = std::get_if<PowerLawTail>(&tail_))
    return pl->c * series::inverse_power(i, pl->alpha);
  if (const auto *g = std::get_if<GeometricWeightTail>(&tail_))
    return g->a * pow_int(g->r, static_cast<unsigned>(i - head_.size()));
  return Scalar(0);
}

bool WeightSpec::converges(double s) const {
  if (const auto *pl = std::get_if<PowerLawTail>(&tail_))
    return pl->alpha + s > 1.0;
  return true;
}

CertifiedValue WeightSpec::tail_sum(std::size_t n, double s) const {
  const std::size_t m = head_.size();
  CertifiedValue total(0);
  for (std::size_t i = n + 1; i <= m; ++i)
    if (!head_[i - 1].is_zero())
      total = total + CertifiedValue(head_[i - 1] * series::inverse_power(i, s));
  if (const auto *pl = std::get_if<PowerLawTail>(&tail_)) {
    if (!converges(s))
      return CertifiedValue::infinity();
    total = total + CertifiedValue(pl->c) * series::power_tail(pl->alpha + s, std::max(n, m));
  } else if (const auto *g = std::get_if<GeometricWeightTail>(&tail_)) {
    total = total + series::geometric_power_tail(g->a, g->r, m, s, n);
  }
  return total;
}

Scalar WeightSpec::sup_after(std::size_t n) const {
  const std::size_t m = head_.size();
  Scalar best(0);
  for (std::size_t i = n + 1; i <= m; ++i)
    best = max(best, head_[i - 1]);
  if (!has_zero_tail())
    best = max(best, at(std::max(n, m) + 1));
  return best;
}

CertifiedValue W(const WeightSpec &w, std::size_t n) {
  if (n == 0)
    return CertifiedValue(0);
  const std::size_t m = w.head_size();
  Scalar head(0);
  for (std::size_t i = 1; i <= std::min(n, m); ++i)
    head += w.head()[i - 1];
  CertifiedValue total(head);
  if (n <= m)
    return total;
  if (const auto *pl = std::get_if<PowerLawTail>(&w.tail())) {
    if (pl->alpha == 0.0)
      return total + CertifiedValue(pl->c * Scalar(static_cast<unsigned long>(n - m)));
    return total + CertifiedValue(pl->c) * series::power_range(pl->alpha, m + 1, n);
  }
  if (const auto *g = std::get_if<GeometricWeightTail>(&w.tail())) {
    const Scalar one(1);
    return total + CertifiedValue(g->a * g->r * (one - pow_int(g->r, static_cast<unsigned>(n - m))) /
                                  (one - g->r));
  }
  return total;
}

WInfinity W_inf_class(const WeightSpec &w) {
  const std::size_t m = w.head_size();
  if (const auto *pl = std::get_if<PowerLawTail>(&w.tail())) {
    if (pl->alpha <= 1.0)
      return {true, CertifiedValue::infinity()};
    return {false, W(w, m) + CertifiedValue(pl->c) * series::power_tail(pl->alpha, m)};
  }
  if (const auto *g = std::get_if<GeometricWeightTail>(&w.tail()))
    return {false, W(w, m) + CertifiedValue(g->a * g->r / (Scalar(1) - g->r))};
  return {false, W(w, m)};
}

CertifiedValue Wp(const WeightSpec &w, std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("Wp: n must be positive");
  CertifiedValue tail = w.tail_sum(n, w.p());
  if (tail.exact() && tail.value.is_zero())
    return tail;
  return CertifiedValue(power(Scalar(static_cast<unsigned long>(n)), w.p())) * tail;
}

CertifiedValue phi(const WeightSpec &w, std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("phi: n must be positive");
  return root(W(w, n) + Wp(w, n), w.p());
}

CertifiedValue psi(const WeightSpec &w, std::size_t n) {
  require_unit_p(w, "psi");
  CertifiedValue f = phi(w, n);
  if (f.value.is_zero())
    throw std::domain_error("psi: phi(n) = 0");
  return CertifiedValue(Scalar(static_cast<unsigned long>(n))) / f;
}

CertifiedValue derived_v(const WeightSpec &w, std::size_t i) {
  require_unit_p(w, "derived_v");
  if (i == 0)
    throw std::invalid_argument("derived_v: i must be positive");
  return w.tail_sum(i - 1, 1.0);
}

std::vector<CertifiedValue> derived_v_table(const WeightSpec &w, std::size_t n) {
  require_unit_p(w, "derived_v_table");
  std::vector<CertifiedValue> out(n);
  if (n == 0)
    return out;
  out[n - 1] = w.tail_sum(n - 1, 1.0);
  for (std::size_t i = n - 1; i >= 1; --i)
    out[i - 1] = out[i] + CertifiedValue(w.at(i) / Scalar(static_cast<unsigned long>(i)));
  return out;
}

Sequence derived_v_sequence(const WeightSpec &w) {
  if (!w.has_zero_tail())
    throw std::domain_error("derived_v_sequence: derived weight has infinite support");
  std::vector<Scalar> head;
  for (const auto &v : derived_v_table(w, w.head_size()))
    head.push_back(v.value);
  while (!head.empty() && head.back().is_zero())
    head.pop_back();
  return Sequence(std::move(head));
}

FundamentalTable::FundamentalTable(const WeightSpec &w, std::size_t n)
    : w_(w), limit_(W_inf_class(w)) {
  phi_.reserve(n);
  CertifiedValue running(0);
  for (std::size_t k = 1; k <= n; ++k) {
    running = running + CertifiedValue(w.at(k));
    phi_.push_back(root(running + Wp(w, k), w.p()));
  }
}

CertifiedValue FundamentalTable::operator()(std::size_t n) const {
  if (n == 0)
    throw std::invalid_argument("FundamentalTable: n must be positive");
  if (n <= phi_.size())
    return phi_[n - 1];
  return phi(w_, n);
}

RegimeReport regime(const WeightSpec &w) {
  RegimeReport r;
  r.W_infinite = W_inf_class(w).infinite;
  r.all_weights_positive =
      !w.has_zero_tail() &&
      std::all_of(w.head().begin(), w.head().end(), [](const Scalar &v) { return v.sign() > 0; });
  r.order_continuous = r.W_infinite;
  r.strictly_monotone = r.W_infinite;
  r.dual_is_m_psi = r.W_infinite;
  r.predual_is_m_psi0 = r.W_infinite;
  r.strictly_convex = w.p() > 1.0 && r.all_weights_positive && r.W_infinite;
  r.fatou = true;
  return r;
}

} // namespace lorentz
