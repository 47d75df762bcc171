#ifndef LORENTZ_APPROX_HPP
#define LORENTZ_APPROX_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lorentz/geometry.hpp"
#include "lorentz/scalar.hpp"
#include "lorentz/weights.hpp"

namespace lorentz {

using Vector = std::vector<Scalar>;
/// Row-major N x N matrix.
using Matrix = std::vector<std::vector<Scalar>>;

struct ProjectionResult {
  std::vector<double> coefficients;
  /// ||x - sum_j c_j b_j|| at the returned coefficients.
  CertifiedValue distance;
  std::size_t iterations = 0;
  /// distance minus the best value found by the search oracle.
  std::optional<double> oracle_gap;
};

/// An element of the best-approximation set of x in span(basis) for the
/// gamma_{1,w} norm on R^N (p = 1, N <= 32, at most 8 basis vectors).
///
/// Subgradient descent on c -> ||x - Bc||_{d_{1,v}}, then a polish that moves to
/// intersections of nearby kink hyperplanes (z_i = 0, z_i = +/- z_j) and a
/// coordinate pattern search. The search oracle runs afterwards and its gap is
/// reported.
ProjectionResult metric_projection(const WeightSpec &w, const Vector &x, const std::vector<Vector> &basis,
                                   double tol = 1e-9, std::uint64_t seed = 1);

/// Independent minimum of ||x - Bc|| by random multistart and pattern search,
/// evaluating the norm as sum_n x**(n) w(n).
double projection_oracle(const WeightSpec &w, const Vector &x, const std::vector<Vector> &basis,
                         std::uint64_t seed = 1, std::size_t starts = 16);

/// max over the extreme points e of the ball in R^N of ||Pe|| (W(infinity) =
/// infinity, N <= 12).
///
/// With rational P the value 1 is returned exactly when every image P sigma of
/// a signed indicator sigma of size n0 satisfies sum_{i<=n} (P sigma)*(i) <=
/// min(n, n0) (which bounds ||P sigma|| by phi(n0), v being nonincreasing) and
/// some image is itself a signed indicator of size n0.
CertifiedValue operator_norm_via_extremes(const WeightSpec &w, std::size_t n, const Matrix &p);

Verdict is_norm_one_projection(const WeightSpec &w, std::size_t n, const Matrix &p,
                               const std::vector<Vector> &basis);

struct ExistenceReport {
  std::size_t samples = 0;
  /// Sampled x whose metric projection was found.
  std::size_t attained = 0;
  /// Largest oracle gap over the samples.
  double max_oracle_gap = 0.0;
  CertifiedValue best_norm;
  Matrix best_projection;
  bool certified_one = false;
};

/// Samples best approximations onto V = span(basis) and searches the linear
/// projections onto V, P = B L^T with L^T B = I, for the smallest operator
/// norm. Candidates: the orthogonal projection, the coordinate projections
/// B (B_S)^{-1} E_S^T, then a pattern search over the complement block.
ExistenceReport existence_set_probe(const WeightSpec &w, std::size_t n, const std::vector<Vector> &basis,
                                    std::size_t trials, std::uint64_t seed = 1);

Matrix identity_matrix(std::size_t n);
Matrix coordinate_projection(std::size_t n, const std::vector<std::size_t> &coords);

} // namespace lorentz

#endif // LORENTZ_APPROX_HPP
