#ifndef LORENTZ_NORMS_HPP
#define LORENTZ_NORMS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "lorentz/scalar.hpp"
#include "lorentz/sequence.hpp"
#include "lorentz/weights.hpp"

namespace lorentz {

/// Value of a supremum together with where it is reached.
struct SupResult {
  CertifiedValue value;
  /// First index attaining the supremum; empty when the supremum is only a
  /// limit.
  std::optional<std::size_t> attained_at;
  /// All indices that attain the supremum (in float mode: cannot be excluded
  /// from attaining it by the certified radii).
  std::vector<std::size_t> attaining;
  /// The supremum is also reached by every index past the last listed one.
  bool attained_on_tail = false;
};

/// ||x||_{gamma_{p,w}} = (sum_n x**(n)^p w(n))^{1/p}; +infinity when divergent.
CertifiedValue norm_gamma(const WeightSpec &w, const Sequence &x);

/// ||x||_{d_{1,u}} = sum_n x*(n) u(n); the exponent carried by u is ignored.
CertifiedValue norm_d1(const WeightSpec &u, const Sequence &x);

/// ||x||_{d_{1,v}} with v the derived weight of w (p = 1).
CertifiedValue norm_d1_derived(const WeightSpec &w, const Sequence &x);

/// ||x||_{m_psi} = sup_n x**(n) psi(n) = sup_n (sum_{i<=n} x*(i)) / phi(n), p = 1.
///
/// Throws std::domain_error for a constant tail c > 0: the partial sums grow
/// like c n while phi(n) = o(n), so the supremum is infinite.
SupResult norm_m_psi(const WeightSpec &w, const Sequence &x);

/// sup_n x**(n) phi(n), the Marcinkiewicz norm built on phi itself.
SupResult norm_m_phi(const WeightSpec &w, const Sequence &x);

/// Whether x**(n) psi(n) tends to 0, decided from the tail classes.
bool in_m_psi0(const WeightSpec &w, const Sequence &x);

/// sum_n x(n) y(n). Throws std::domain_error when both tails are positive
/// constants (the series diverges).
CertifiedValue pairing(const Sequence &x, const Sequence &y);

/// sum x*(n) y*(n) - sum |x(n) y(n)|.
CertifiedValue hardy_littlewood_gap(const Sequence &x, const Sequence &y);

/// | ||x||_{gamma_{1,w}} - ||x||_{d_{1,v}} |.
CertifiedValue isometry_residual(const WeightSpec &w, const Sequence &x);

/// ||x||_{gamma_{p,w}} - sup_n x**(n) phi(n). Throws std::domain_error when
/// the norm is infinite.
CertifiedValue embedding_gap(const WeightSpec &w, const Sequence &x);

} // namespace lorentz

#endif // LORENTZ_NORMS_HPP
