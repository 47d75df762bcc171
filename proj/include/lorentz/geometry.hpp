#ifndef LORENTZ_GEOMETRY_HPP
#define LORENTZ_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/errors.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/sequence.hpp"
#include "lorentz/weights.hpp"

namespace lorentz {

struct ConditionOutcome {
  std::string name;
  bool holds = false;
};

/// Classification result with a machine-readable witness.
struct Verdict {
  bool result = false;
  /// Attaining index n0 (true verdicts) or violating index (false verdicts).
  std::optional<std::size_t> index;
  /// Tag of the failed condition; empty for true verdicts.
  std::string failed;
  /// Decomposition or counterexample pair.
  std::optional<std::pair<Sequence, Sequence>> pair;
  /// Strict gap reported by the dual smoothness test.
  std::optional<CertifiedValue> gap;
  std::vector<ConditionOutcome> conditions;
};

/// Sphere tolerance for float-mode inputs.
inline constexpr double kSphereTolerance = 1e-9;

/// Extreme points of the gamma_{1,w} ball (W(infinity) = infinity):
/// x is extreme iff x* = chi_{[1,n0]} / phi(n0) and W(n0 - 1) > 0 when n0 > 1.
///
/// A false verdict carries a pair (y, z) on the sphere with x = (y + z) / 2,
/// held in exact rationals so the midpoint identity is exact.
Verdict classify_extreme_gamma1(const WeightSpec &w, const Sequence &x);

/// x = (y + z)/2 with y != z on the sphere, for x whose rearrangement is not
/// flat. The top plateau (length n0) is lowered by b and the next plateau
/// (length n1) raised by a, with b = a (phi(n0 + n1) - phi(n0)) / phi(n0), which
/// keeps the norm; a is small enough to keep the order.
std::pair<Sequence, Sequence> plateau_decomposition(const WeightSpec &w, const Sequence &x);

/// x = (y + z)/2 for flat x* of length n0 > 1 with W(n0 - 1) = 0: move mass
/// between the first and the n0-th position.
std::pair<Sequence, Sequence> swap_decomposition(const WeightSpec &w, const Sequence &x);

/// Independent search for y = x + d, z = x - d on the sphere with d != 0 in
/// R^N. The ball restricted to R^N is the polytope cut out by the functionals
/// sum_i s_i v(i) e_{pi(i)}; the functionals active at x are enumerated and any
/// direction in the common kernel gives a pair. Random and grid directions
/// make up the rest of the budget. Returned pairs are checked with norm_gamma.
std::optional<std::pair<Sequence, Sequence>> extreme_midpoint_oracle(const WeightSpec &w, const Sequence &x,
                                                                     std::size_t n, std::size_t budget,
                                                                     std::uint64_t seed = 1);

/// Extreme points of the dual ball: x* = v termwise.
Verdict classify_extreme_dual(const WeightSpec &w, const Sequence &x);

/// Smooth points of the gamma_{1,w} sphere: infinite support, and
/// x*(n) > x*(n + 1) wherever w(n) > 0.
Verdict classify_smooth_gamma1(const WeightSpec &w, const Sequence &x);

/// Smooth points of the m_psi0 sphere: exactly one n with x**(n) psi(n) = 1.
Verdict classify_smooth_predual(const WeightSpec &w, const Sequence &x);

/// Smooth points of the dual sphere: a unique attaining n0 with a strict gap
/// to every other index.
Verdict classify_smooth_dual(const WeightSpec &w, const Sequence &x);

enum class TieBreak { lowest_index_first, highest_index_first };

/// Positions ordered by decreasing |x|: sigma(1), sigma(2), ... (1-based),
/// covering the first `count` ranks. Indices outside the support follow in
/// increasing order.
std::vector<std::size_t> rank_positions(const Sequence &x, std::size_t count,
                                        TieBreak ties = TieBreak::lowest_index_first);

/// y(sigma(k)) = sg(x(sigma(k))) v(k): pairing(x, y) = ||x|| and ||y||_{m_psi} = 1.
Sequence norming_functional(const WeightSpec &w, const Sequence &x,
                            TieBreak ties = TieBreak::lowest_index_first);

struct NormingElement {
  Sequence x;
  /// Index the construction is built on (n0 or the supplied m).
  std::size_t index = 0;
  /// (sum_{n<=index} y*(n)) / phi(index).
  CertifiedValue quotient;
};

/// Norming element for y in m_psi: x = sg(y) / phi(n0) on sigma([1, n0]) with
/// n0 the first index attaining the supremum, or on sigma([1, m]) when m is
/// given. Padding indices where y vanishes take the sign +1.
NormingElement norming_element(const WeightSpec &w, const Sequence &y,
                               std::optional<std::size_t> m = std::nullopt);

enum class CounterexampleKind {
  oc_failure,
  sm_failure,
  sc_p1,
  sc_winf,
  sc_zero_weight_n0_1,
  sc_zero_weight_n0_gt1,
};

std::string to_string(CounterexampleKind kind);
CounterexampleKind counterexample_kind(const std::string &name);

struct CheckedIdentity {
  std::string name;
  CertifiedValue lhs;
  CertifiedValue rhs;
  bool holds = false;
  bool exact = false;
};

struct CounterexampleBundle {
  CounterexampleKind kind;
  std::vector<std::pair<std::string, Sequence>> sequences;
  std::vector<CheckedIdentity> checks;
  bool verified = false;
};

/// Fixtures from the necessity arguments, each verifying its own equalities.
/// `epsilon` applies to the zero-first-weight pair (default 1/(2 phi(2))).
/// Throws RegimeError when w is outside the kind's regime.
CounterexampleBundle counterexample(CounterexampleKind kind, const WeightSpec &w,
                                    std::optional<Scalar> epsilon = std::nullopt);

/// A signed, scaled indicator chi_A / phi(n0) in R^N.
struct ExtremePoint {
  std::vector<int> signs; ///< -1, 0 or +1 per coordinate; |A| = n0 nonzeros
  std::size_t n0 = 0;
  Scalar scale; ///< 1 / phi(n0)

  std::vector<Scalar> coordinates() const;
  Sequence sequence() const;
};

/// Visit every extreme point of the ball of gamma_{1,w} restricted to R^N.
void for_each_extreme_point(const WeightSpec &w, std::size_t n,
                            const std::function<void(const ExtremePoint &)> &visit);

/// All extreme points of the ball restricted to R^N (N <= 12).
std::vector<ExtremePoint> enumerate_extreme_points(const WeightSpec &w, std::size_t n);

/// sum over admissible n0 of C(N, n0) 2^{n0}.
std::size_t extreme_point_count(const WeightSpec &w, std::size_t n);

} // namespace lorentz

#endif // LORENTZ_GEOMETRY_HPP
