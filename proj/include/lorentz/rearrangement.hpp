#ifndef LORENTZ_REARRANGEMENT_HPP
#define LORENTZ_REARRANGEMENT_HPP

#include <cstddef>
#include <vector>

#include "lorentz/scalar.hpp"
#include "lorentz/sequence.hpp"

namespace lorentz {

/// d_x(lambda) = card{k : |x(k)| > lambda}.
ExtendedCount distribution(const Sequence &x, const Scalar &lambda);

/// Decreasing rearrangement x*(n) = inf{lambda >= 0 : d_x(lambda) <= n - 1}.
///
/// The result has a nonnegative nonincreasing head with trailing zeros
/// stripped. Head values strictly below a constant tail c have infinite rank
/// and vanish; values equal to c merge into the plateau. Geometric tail terms
/// that are at least as large as the smallest positive head value are merged
/// into the head, so the returned tail continues the sorted order.
Sequence rearrangement(const Sequence &x);

/// x*(infinity) = lim x*(n).
Scalar rearrangement_limit(const Sequence &x);

/// Prefix sums of a decreasing rearrangement, answering sum_{i<=n} x*(i) in
/// O(1) after construction.
class RearrangedSums {
public:
  explicit RearrangedSums(const Sequence &x);

  const Sequence &rearranged() const { return sorted_; }
  std::size_t head_size() const { return sorted_.head_size(); }
  /// sum_{i <= head_size()} x*(i).
  const Scalar &head_total() const { return prefix_.back(); }

  /// sum_{i=1}^n x*(i), exact for exact data (tail partial sums are closed form).
  Scalar sum_first(std::size_t n) const;
  /// x*(n).
  Scalar value(std::size_t n) const { return sorted_.at(n); }
  /// x**(n) = sum_first(n) / n.
  Scalar maximal(std::size_t n) const;

private:
  Sequence sorted_;
  std::vector<Scalar> prefix_;
};

/// x**(n) = (1/n) sum_{i<=n} x*(i). The sum is finite so the value is exact
/// for exact data, including the geometric partial sums.
CertifiedValue maximal_at(const Sequence &x, std::size_t n);

/// d_x == d_y, decided on the canonical rearranged forms.
bool equimeasurable(const Sequence &x, const Sequence &y);

/// card{n : |x(n) - y(n)| > eps}.
ExtendedCount measure_gap(const Sequence &x, const Sequence &y, const Scalar &eps);

/// (x + y)*(i) == x*(i) + y*(i) for i = 1..window. Both tails must be zero and
/// window must reach the last support index, so the window check decides the
/// identity everywhere.
bool additivity_holds(const Sequence &x, const Sequence &y, std::size_t window);

/// Shape of the common maximizing sets in the sign/window condition.
enum class WindowSets {
  unrestricted, ///< any n-sets E_n
  nested        ///< E_1 subset E_2 subset ...
};

/// Sign agreement plus common maximizing n-sets, found by exhaustive subset
/// enumeration over the combined support.
///
/// Sign agreement is read as "no index carries opposite signs", i.e.
/// x(i) y(i) >= 0; a zero entry agrees with either sign.
bool sign_window_condition(const Sequence &x, const Sequence &y,
                           WindowSets sets = WindowSets::unrestricted,
                           std::size_t max_support = 12);

} // namespace lorentz

#endif // LORENTZ_REARRANGEMENT_HPP
