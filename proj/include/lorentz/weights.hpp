#ifndef LORENTZ_WEIGHTS_HPP
#define LORENTZ_WEIGHTS_HPP

#include <cstddef>
#include <variant>
#include <vector>

#include "lorentz/scalar.hpp"
#include "lorentz/sequence.hpp"

namespace lorentz {

/// w(i) = c i^{-alpha} past the head.
struct PowerLawTail {
  Scalar c;
  double alpha = 0.0;
};

/// w(M + k) = a r^k past a head of length M.
struct GeometricWeightTail {
  Scalar a;
  Scalar r;
};

using WeightTail = std::variant<ZeroTail, PowerLawTail, GeometricWeightTail>;

/// A nonnegative, nontrivial weight sequence w(1), w(2), ... together with
/// the exponent p of the Lorentz space it generates.
///
/// Construction rejects trivial weights (all zero) and specs for which
/// W_p(n) = n^p sum_{i>n} w(i)/i^p diverges.
class WeightSpec {
public:
  WeightSpec(std::vector<Scalar> head, WeightTail tail, double p);
  WeightSpec(std::initializer_list<Scalar> head, double p = 1.0)
      : WeightSpec(std::vector<Scalar>(head), ZeroTail{}, p) {}

  static WeightSpec power_law(Scalar c, double alpha, double p, std::vector<Scalar> head = {});

  const std::vector<Scalar> &head() const { return head_; }
  const WeightTail &tail() const { return tail_; }
  std::size_t head_size() const { return head_.size(); }
  double p() const { return p_; }
  bool has_zero_tail() const { return std::holds_alternative<ZeroTail>(tail_); }

  /// Same weights, different exponent.
  WeightSpec with_p(double p) const { return WeightSpec(head_, tail_, p); }

  /// w(i) for i >= 1.
  Scalar at(std::size_t i) const;

  /// Whether sum_i w(i) i^{-s} converges.
  bool converges(double s) const;

  /// sum_{i > n} w(i) i^{-s}, +infinity when the series diverges.
  CertifiedValue tail_sum(std::size_t n, double s) const;

  /// An upper bound for w(i) over all i > n (the tails are nonincreasing).
  Scalar sup_after(std::size_t n) const;

private:
  std::vector<Scalar> head_;
  WeightTail tail_;
  double p_;
};

/// W(n) = sum_{i <= n} w(i).
CertifiedValue W(const WeightSpec &w, std::size_t n);

/// Classification of W(infinity).
struct WInfinity {
  bool infinite = false;
  CertifiedValue value; ///< meaningful only when finite
};

WInfinity W_inf_class(const WeightSpec &w);

/// W_p(n) = n^p sum_{i > n} w(i) / i^p.
CertifiedValue Wp(const WeightSpec &w, std::size_t n);

/// Fundamental sequence phi(n) = (W(n) + W_p(n))^{1/p}.
CertifiedValue phi(const WeightSpec &w, std::size_t n);

/// psi(n) = n / phi(n), for p = 1.
CertifiedValue psi(const WeightSpec &w, std::size_t n);

/// v(i) = sum_{k >= i} w(k) / k, for p = 1.
CertifiedValue derived_v(const WeightSpec &w, std::size_t i);

/// Derived weight v(1..n) in one backward sweep (v(i) = v(i+1) + w(i)/i).
std::vector<CertifiedValue> derived_v_table(const WeightSpec &w, std::size_t n);

/// The derived weight as a sequence, when it has finite support (zero-tail w).
Sequence derived_v_sequence(const WeightSpec &w);

/// phi(1..n) computed incrementally; falls back to direct evaluation past n.
class FundamentalTable {
public:
  FundamentalTable(const WeightSpec &w, std::size_t n);

  const WeightSpec &weights() const { return w_; }
  std::size_t size() const { return phi_.size(); }
  CertifiedValue operator()(std::size_t n) const;
  /// phi(infinity) = W(infinity)^{1/p}.
  const WInfinity &limit() const { return limit_; }

private:
  WeightSpec w_;
  std::vector<CertifiedValue> phi_;
  WInfinity limit_;
};

struct RegimeReport {
  bool W_infinite = false;
  bool order_continuous = false;
  bool strictly_monotone = false;
  bool strictly_convex = false;
  bool fatou = true;
  bool dual_is_m_psi = false;
  bool predual_is_m_psi0 = false;
  bool all_weights_positive = false;
};

RegimeReport regime(const WeightSpec &w);

} // namespace lorentz

#endif // LORENTZ_WEIGHTS_HPP
