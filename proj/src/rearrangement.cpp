#include "lorentz/rearrangement.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace lorentz {

namespace {

// sum_{k=1}^{m} a r^k in closed form
Scalar geometric_partial(const GeometricTail &g, std::size_t m) {
  if (m == 0)
    return Scalar(0);
  return g.a * g.r * (Scalar(1) - pow_int(g.r, static_cast<unsigned>(m))) / (Scalar(1) - g.r);
}

std::vector<Scalar> sorted_magnitudes(const std::vector<Scalar> &head) {
  std::vector<Scalar> out;
  out.reserve(head.size());
  for (const auto &v : head)
    if (!v.is_zero())
      out.push_back(abs(v));
  std::sort(out.begin(), out.end(), [](const Scalar &a, const Scalar &b) { return b < a; });
  return out;
}

} // namespace

ExtendedCount distribution(const Sequence &x, const Scalar &lambda) {
  if (lambda.sign() < 0)
    throw std::invalid_argument("distribution: lambda must be nonnegative");
  std::size_t count = 0;
  for (const auto &v : x.head())
    if (abs(v) > lambda)
      ++count;
  if (const auto *c = std::get_if<ConstantTail>(&x.tail()))
    return c->c > lambda ? ExtendedCount::unbounded() : ExtendedCount::finite(count);
  if (const auto *g = std::get_if<GeometricTail>(&x.tail())) {
    if (lambda.is_zero())
      return ExtendedCount::unbounded();
    Scalar term = g->a * g->r;
    while (term > lambda) {
      ++count;
      term *= g->r;
    }
  }
  return ExtendedCount::finite(count);
}

Sequence rearrangement(const Sequence &x) {
  std::vector<Scalar> mags = sorted_magnitudes(x.head());

  if (x.has_zero_tail())
    return Sequence(std::move(mags));

  if (const auto *c = std::get_if<ConstantTail>(&x.tail())) {
    // values <= c are absorbed by (or hidden below) the infinite plateau
    auto cut = std::find_if(mags.begin(), mags.end(), [&](const Scalar &v) { return !(v > c->c); });
    mags.erase(cut, mags.end());
    return Sequence(std::move(mags), *c);
  }

  const auto &g = std::get<GeometricTail>(x.tail());
  if (mags.empty())
    return Sequence({}, g);
  // merge the tail terms that are not below the smallest positive head value
  const Scalar smallest = mags.back();
  Scalar term = g.a * g.r;
  Scalar amplitude = g.a;
  while (!(term < smallest)) {
    mags.push_back(term);
    amplitude = term;
    term *= g.r;
  }
  std::sort(mags.begin(), mags.end(), [](const Scalar &a, const Scalar &b) { return b < a; });
  return Sequence(std::move(mags), GeometricTail{amplitude, g.r});
}

Scalar rearrangement_limit(const Sequence &x) {
  if (const auto *c = std::get_if<ConstantTail>(&x.tail()))
    return c->c;
  return Scalar(0);
}

RearrangedSums::RearrangedSums(const Sequence &x) : sorted_(rearrangement(x)) {
  prefix_.reserve(sorted_.head_size() + 1);
  prefix_.emplace_back(0);
  for (const auto &v : sorted_.head())
    prefix_.push_back(prefix_.back() + v);
}

Scalar RearrangedSums::sum_first(std::size_t n) const {
  const std::size_t m = sorted_.head_size();
  if (n <= m)
    return prefix_[n];
  const std::size_t extra = n - m;
  if (const auto *c = std::get_if<ConstantTail>(&sorted_.tail()))
    return prefix_[m] + c->c * Scalar(extra);
  if (const auto *g = std::get_if<GeometricTail>(&sorted_.tail()))
    return prefix_[m] + geometric_partial(*g, extra);
  return prefix_[m];
}

Scalar RearrangedSums::maximal(std::size_t n) const {
  if (n == 0)
    throw std::invalid_argument("maximal: n must be positive");
  return sum_first(n) / Scalar(n);
}

CertifiedValue maximal_at(const Sequence &x, std::size_t n) {
  Scalar v = RearrangedSums(x).maximal(n);
  return {v, v.is_exact() ? 0.0 : rounding_allowance(v.to_double(), 2.0 * static_cast<double>(n))};
}

bool equimeasurable(const Sequence &x, const Sequence &y) {
  return rearrangement(x) == rearrangement(y);
}

ExtendedCount measure_gap(const Sequence &x, const Sequence &y, const Scalar &eps) {
  if (eps.sign() <= 0)
    throw std::invalid_argument("measure_gap: eps must be positive");
  std::size_t len = std::max(x.head_size(), y.head_size());
  // walk forward until every geometric tail has dropped to eps or below; past
  // that point |x(n) - y(n)| only depends on the tail limits
  auto geometric_done = [&](const Sequence &s, std::size_t n) {
    const auto *g = std::get_if<GeometricTail>(&s.tail());
    return !g || !(s.at(n + 1) > eps);
  };
  while (!(geometric_done(x, len) && geometric_done(y, len)))
    ++len;
  std::size_t count = 0;
  for (std::size_t n = 1; n <= len; ++n)
    if (abs(x.at(n) - y.at(n)) > eps)
      ++count;
  if (abs(rearrangement_limit(x) - rearrangement_limit(y)) > eps)
    return ExtendedCount::unbounded();
  return ExtendedCount::finite(count);
}

bool additivity_holds(const Sequence &x, const Sequence &y, std::size_t window) {
  if (!x.has_zero_tail() || !y.has_zero_tail())
    throw std::invalid_argument("additivity_holds: sequences must be finitely supported");
  if (window < std::max(x.support_end(), y.support_end()))
    throw std::invalid_argument("additivity_holds: window does not cover the supports");
  Sequence sum = rearrangement(x + y);
  Sequence xs = rearrangement(x), ys = rearrangement(y);
  for (std::size_t i = 1; i <= window; ++i)
    if (sum.at(i) != xs.at(i) + ys.at(i))
      return false;
  return true;
}

bool sign_window_condition(const Sequence &x, const Sequence &y, WindowSets sets,
                           std::size_t max_support) {
  if (!x.has_zero_tail() || !y.has_zero_tail())
    throw std::invalid_argument("sign_window_condition: sequences must be finitely supported");
  const std::size_t len = std::max(x.support_end(), y.support_end());
  std::vector<Scalar> ax, ay;
  for (std::size_t i = 1; i <= len; ++i) {
    Scalar xi = x.at(i), yi = y.at(i);
    if (xi.sign() * yi.sign() < 0)
      return false;
    if (!xi.is_zero() || !yi.is_zero()) {
      ax.push_back(abs(xi));
      ay.push_back(abs(yi));
    }
  }
  const std::size_t k = ax.size();
  if (k > max_support)
    throw std::invalid_argument("sign_window_condition: combined support exceeds the enumeration bound");
  if (k == 0)
    return true;

  RearrangedSums xs(x), ys(y);
  const std::uint32_t subsets = 1u << k;
  std::vector<Scalar> sum_x(subsets), sum_y(subsets);
  for (std::uint32_t s = 1; s < subsets; ++s) {
    const int low = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    sum_x[s] = sum_x[rest] + ax[static_cast<std::size_t>(low)];
    sum_y[s] = sum_y[rest] + ay[static_cast<std::size_t>(low)];
  }
  // E_n may pad a subset of the support with indices outside it (zero entries)
  auto attains = [&](std::uint32_t s, std::size_t n) {
    return static_cast<std::size_t>(std::popcount(s)) <= n && sum_x[s] == xs.sum_first(n) &&
           sum_y[s] == ys.sum_first(n);
  };

  if (sets == WindowSets::unrestricted) {
    for (std::size_t n = 1; n <= k; ++n) {
      bool found = false;
      for (std::uint32_t s = 0; s < subsets && !found; ++s)
        found = attains(s, n);
      if (!found)
        return false;
    }
    return true;
  }

  // nested: E_{n+1} adds at most one support index to E_n
  std::vector<char> reachable(subsets, 0);
  reachable[0] = 1;
  for (std::size_t n = 1; n <= k; ++n) {
    std::vector<char> next(subsets, 0);
    bool any = false;
    for (std::uint32_t s = 0; s < subsets; ++s) {
      if (!reachable[s])
        continue;
      if (attains(s, n))
        next[s] = any = true;
      for (std::size_t j = 0; j < k; ++j) {
        const std::uint32_t t = s | (1u << j);
        if (t != s && attains(t, n))
          next[t] = any = true;
      }
    }
    if (!any)
      return false;
    reachable.swap(next);
  }
  return true;
}

} // namespace lorentz
