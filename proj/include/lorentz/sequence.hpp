#ifndef LORENTZ_SEQUENCE_HPP
#define LORENTZ_SEQUENCE_HPP

#include <cstddef>
#include <initializer_list>
#include <variant>
#include <vector>

#include "lorentz/scalar.hpp"

namespace lorentz {

/// Tail value 0 at every index past the head.
struct ZeroTail {
  friend bool operator==(const ZeroTail &, const ZeroTail &) = default;
};

/// Tail value c >= 0 at every index past the head.
struct ConstantTail {
  Scalar c;
};

/// Tail value a * r^k at index M + k (k >= 1), with a > 0 and 0 < r < 1.
struct GeometricTail {
  Scalar a;
  Scalar r;
};

using TailClass = std::variant<ZeroTail, ConstantTail, GeometricTail>;

/// A real sequence indexed from 1: explicit head values x(1..M) followed by
/// an analytic tail.
///
/// Equality is mathematical equality of the two sequences, not equality of
/// the representations: (1 | Geometric(1, 1/2)) == (| Geometric(2, 1/2)).
class Sequence {
public:
  Sequence() = default;
  explicit Sequence(std::vector<Scalar> head, TailClass tail = ZeroTail{});
  Sequence(std::initializer_list<Scalar> head) : Sequence(std::vector<Scalar>(head)) {}

  /// Unit vector e_n of the standard basis.
  static Sequence unit(std::size_t n);
  /// Indicator of {1, ..., n}.
  static Sequence indicator(std::size_t n);

  const std::vector<Scalar> &head() const { return head_; }
  const TailClass &tail() const { return tail_; }
  std::size_t head_size() const { return head_.size(); }

  bool has_zero_tail() const { return std::holds_alternative<ZeroTail>(tail_); }
  bool has_constant_tail() const { return std::holds_alternative<ConstantTail>(tail_); }
  bool has_geometric_tail() const { return std::holds_alternative<GeometricTail>(tail_); }

  /// x(n) for n >= 1.
  Scalar at(std::size_t n) const;

  /// Value of the tail at index M + k (k >= 1).
  Scalar tail_at(std::size_t k) const;

  /// Largest index with a nonzero value when the tail is zero (0 for x = 0).
  std::size_t support_end() const;
  bool finitely_supported() const { return has_zero_tail(); }
  bool is_zero() const { return has_zero_tail() && support_end() == 0; }
  bool all_exact() const;

  /// Same sequence with the head extended to at least `length` entries.
  Sequence materialized(std::size_t length) const;

  Sequence abs() const;
  Sequence scaled(const Scalar &lambda) const;

  friend bool operator==(const Sequence &x, const Sequence &y);

private:
  std::vector<Scalar> head_;
  TailClass tail_ = ZeroTail{};
};

/// Termwise sum. Tails must combine into one of the tail classes.
Sequence operator+(const Sequence &x, const Sequence &y);
Sequence operator-(const Sequence &x, const Sequence &y);

/// Apply a permutation of the first `perm.size()` indices and a sign pattern
/// to a sequence: y(perm[i] + 1) = signs[i] * x(i + 1), with perm a permutation
/// of {0, ..., n-1}. Entries past n and the tail are kept.
Sequence permute_and_flip(const Sequence &x, const std::vector<std::size_t> &perm,
                          const std::vector<int> &signs);

/// Nonnegative integer or +infinity.
struct ExtendedCount {
  bool infinite = false;
  std::size_t value = 0;

  static ExtendedCount finite(std::size_t v) { return {false, v}; }
  static ExtendedCount unbounded() { return {true, 0}; }

  friend bool operator==(const ExtendedCount &, const ExtendedCount &) = default;
};

} // namespace lorentz

#endif // LORENTZ_SEQUENCE_HPP
