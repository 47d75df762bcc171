#include "lorentz/sequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace lorentz {

namespace {

void require_finite(const Scalar &v, const char *what) {
  if (v.is_infinite() || v.to_double() != v.to_double())
    throw std::invalid_argument(std::string("Sequence: non-finite ") + what);
}

// Tail of `x` re-expressed for a head of length `new_len` >= x.head_size().
TailClass shifted_tail(const Sequence &x, std::size_t new_len) {
  if (const auto *g = std::get_if<GeometricTail>(&x.tail()))
    return GeometricTail{g->a * pow_int(g->r, static_cast<unsigned>(new_len - x.head_size())), g->r};
  return x.tail();
}

} // namespace

Sequence::Sequence(std::vector<Scalar> head, TailClass tail)
    : head_(std::move(head)), tail_(std::move(tail)) {
  for (const auto &v : head_)
    require_finite(v, "head value");
  if (auto *c = std::get_if<ConstantTail>(&tail_)) {
    require_finite(c->c, "tail constant");
    if (c->c.sign() < 0)
      throw std::invalid_argument("Sequence: constant tail must be nonnegative");
    if (c->c.is_zero())
      tail_ = ZeroTail{};
  } else if (auto *g = std::get_if<GeometricTail>(&tail_)) {
    require_finite(g->a, "geometric amplitude");
    if (g->a.sign() <= 0)
      throw std::invalid_argument("Sequence: geometric tail needs a > 0");
    if (!(g->r.sign() > 0 && g->r < Scalar(1)))
      throw std::invalid_argument("Sequence: geometric tail needs 0 < r < 1");
  }
}

Sequence Sequence::unit(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("Sequence::unit: indices start at 1");
  std::vector<Scalar> h(n, Scalar(0));
  h[n - 1] = Scalar(1);
  return Sequence(std::move(h));
}

Sequence Sequence::indicator(std::size_t n) {
  return Sequence(std::vector<Scalar>(n, Scalar(1)));
}

Scalar Sequence::tail_at(std::size_t k) const {
  return std::visit(
      [k](const auto &t) -> Scalar {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>)
          return Scalar(0);
        else if constexpr (std::is_same_v<T, ConstantTail>)
          return t.c;
        else
          return t.a * pow_int(t.r, static_cast<unsigned>(k));
      },
      tail_);
}

Scalar Sequence::at(std::size_t n) const {
  if (n == 0)
    throw std::out_of_range("Sequence::at: indices start at 1");
  if (n <= head_.size())
    return head_[n - 1];
  return tail_at(n - head_.size());
}

std::size_t Sequence::support_end() const {
  if (!has_zero_tail())
    throw std::logic_error("Sequence::support_end: sequence has infinite support");
  std::size_t end = head_.size();
  while (end > 0 && head_[end - 1].is_zero())
    --end;
  return end;
}

bool Sequence::all_exact() const {
  for (const auto &v : head_)
    if (!v.is_exact())
      return false;
  return std::visit(
      [](const auto &t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>)
          return true;
        else if constexpr (std::is_same_v<T, ConstantTail>)
          return t.c.is_exact();
        else
          return t.a.is_exact() && t.r.is_exact();
      },
      tail_);
}

Sequence Sequence::materialized(std::size_t length) const {
  if (length <= head_.size())
    return *this;
  std::vector<Scalar> h = head_;
  h.reserve(length);
  for (std::size_t k = 1; h.size() < length; ++k)
    h.push_back(tail_at(k));
  return Sequence(std::move(h), shifted_tail(*this, length));
}

Sequence Sequence::abs() const {
  std::vector<Scalar> h;
  h.reserve(head_.size());
  for (const auto &v : head_)
    h.push_back(lorentz::abs(v));
  return Sequence(std::move(h), tail_);
}

Sequence Sequence::scaled(const Scalar &lambda) const {
  std::vector<Scalar> h;
  h.reserve(head_.size());
  for (const auto &v : head_)
    h.push_back(v * lambda);
  if (has_zero_tail() || lambda.is_zero())
    return Sequence(std::move(h));
  if (lambda.sign() < 0)
    throw std::domain_error("Sequence::scaled: negative multiple of a positive tail");
  if (const auto *c = std::get_if<ConstantTail>(&tail_))
    return Sequence(std::move(h), ConstantTail{c->c * lambda});
  const auto &g = std::get<GeometricTail>(tail_);
  return Sequence(std::move(h), GeometricTail{g.a * lambda, g.r});
}

bool operator==(const Sequence &x, const Sequence &y) {
  const std::size_t last = std::max(x.head_size(), y.head_size()) + 1;
  for (std::size_t n = 1; n <= last; ++n)
    if (x.at(n) != y.at(n))
      return false;
  // Both sequences are in their tails at index `last`, and agree there.
  if (x.tail().index() != y.tail().index())
    return false;
  if (const auto *gx = std::get_if<GeometricTail>(&x.tail()))
    return gx->r == std::get<GeometricTail>(y.tail()).r;
  return true;
}

Sequence operator+(const Sequence &x, const Sequence &y) {
  const std::size_t len = std::max(x.head_size(), y.head_size());
  Sequence xm = x.materialized(len), ym = y.materialized(len);
  std::vector<Scalar> h(len);
  for (std::size_t i = 0; i < len; ++i)
    h[i] = xm.head()[i] + ym.head()[i];
  if (xm.has_zero_tail())
    return Sequence(std::move(h), ym.tail());
  if (ym.has_zero_tail())
    return Sequence(std::move(h), xm.tail());
  const auto *cx = std::get_if<ConstantTail>(&xm.tail());
  const auto *cy = std::get_if<ConstantTail>(&ym.tail());
  if (cx && cy)
    return Sequence(std::move(h), ConstantTail{cx->c + cy->c});
  const auto *gx = std::get_if<GeometricTail>(&xm.tail());
  const auto *gy = std::get_if<GeometricTail>(&ym.tail());
  if (gx && gy && gx->r == gy->r)
    return Sequence(std::move(h), GeometricTail{gx->a + gy->a, gx->r});
  throw std::domain_error("Sequence: sum of these tails is not a supported tail class");
}

Sequence operator-(const Sequence &x, const Sequence &y) {
  const std::size_t len = std::max(x.head_size(), y.head_size());
  Sequence xm = x.materialized(len), ym = y.materialized(len);
  std::vector<Scalar> h(len);
  for (std::size_t i = 0; i < len; ++i)
    h[i] = xm.head()[i] - ym.head()[i];
  if (ym.has_zero_tail())
    return Sequence(std::move(h), xm.tail());
  // identical tails cancel
  if (Sequence({}, xm.tail()) == Sequence({}, ym.tail()))
    return Sequence(std::move(h));
  throw std::domain_error("Sequence: difference of these tails is not a supported tail class");
}

Sequence permute_and_flip(const Sequence &x, const std::vector<std::size_t> &perm,
                          const std::vector<int> &signs) {
  const std::size_t n = perm.size();
  if (signs.size() != n)
    throw std::invalid_argument("permute_and_flip: size mismatch");
  Sequence xm = x.materialized(n);
  std::vector<Scalar> h = xm.head();
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || seen[perm[i]])
      throw std::invalid_argument("permute_and_flip: not a permutation");
    seen[perm[i]] = true;
    h[perm[i]] = signs[i] < 0 ? -xm.head()[i] : xm.head()[i];
  }
  return Sequence(std::move(h), xm.tail());
}

} // namespace lorentz
