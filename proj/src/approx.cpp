#include "lorentz/approx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "lorentz/errors.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/sampling.hpp"

namespace lorentz {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index ix(std::size_t i) { return static_cast<Index>(i); }

std::vector<double> v_doubles(const WeightSpec &w, std::size_t n) {
  std::vector<double> out;
  for (const auto &c : derived_v_table(w, n))
    out.push_back(c.to_double());
  return out;
}

VectorXd to_eigen(const Vector &x) {
  VectorXd out(ix(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    out[ix(i)] = x[i].to_double();
  return out;
}

MatrixXd basis_matrix(const std::vector<Vector> &basis, std::size_t n) {
  MatrixXd b(ix(n), ix(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].size() != n)
      throw std::invalid_argument("basis vectors must have the length of x");
    b.col(ix(j)) = to_eigen(basis[j]);
  }
  return b;
}

MatrixXd to_eigen(const Matrix &p, std::size_t n) {
  if (p.size() != n)
    throw std::invalid_argument("matrix must be N x N");
  MatrixXd out(ix(n), ix(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (p[r].size() != n)
      throw std::invalid_argument("matrix must be N x N");
    for (std::size_t c = 0; c < n; ++c)
      out(ix(r), ix(c)) = p[r][c].to_double();
  }
  return out;
}

bool all_exact(const Matrix &p) {
  for (const auto &row : p)
    for (const auto &e : row)
      if (!e.is_exact())
        return false;
  return true;
}

std::size_t matrix_rank(const MatrixXd &m) {
  Eigen::FullPivLU<MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(lu.rank());
}

// sum_i z*(i) v(i) over R^N
double sorted_dot(const std::vector<double> &v, const VectorXd &z) {
  std::vector<double> a(static_cast<std::size_t>(z.size()));
  for (Index i = 0; i < z.size(); ++i)
    a[static_cast<std::size_t>(i)] = std::fabs(z[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * v[i];
  return s;
}

class Objective {
public:
  Objective(std::vector<double> v, MatrixXd b, VectorXd x) : v_(std::move(v)), b_(std::move(b)), x_(std::move(x)) {}

  double operator()(const VectorXd &c) const { return sorted_dot(v_, x_ - b_ * c); }

  // Tied magnitudes share the average of their v-ranks.
  VectorXd subgradient(const VectorXd &c) const {
    const VectorXd z = x_ - b_ * c;
    const std::size_t n = static_cast<std::size_t>(z.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::fabs(z[ix(a)]) > std::fabs(z[ix(b)]);
    });
    const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    VectorXd g = VectorXd::Zero(ix(n));
    for (std::size_t s = 0; s < n;) {
      std::size_t e = s + 1;
      while (e < n && std::fabs(z[ix(order[s])]) - std::fabs(z[ix(order[e])]) <= 1e-14 * scale)
        ++e;
      double avg = 0.0;
      for (std::size_t k = s; k < e; ++k)
        avg += v_[k];
      avg /= static_cast<double>(e - s);
      for (std::size_t k = s; k < e; ++k) {
        const double zk = z[ix(order[k])];
        g[ix(order[k])] = zk > 0 ? avg : (zk < 0 ? -avg : 0.0);
      }
      s = e;
    }
    return -(b_.transpose() * g);
  }

  const MatrixXd &basis() const { return b_; }
  const VectorXd &point() const { return x_; }
  const std::vector<double> &weights() const { return v_; }

private:
  std::vector<double> v_;
  MatrixXd b_;
  VectorXd x_;
};

struct Hyperplane {
  VectorXd a;
  double b;
};

// Kinks of c -> ||x - Bc||: z_i = 0 and z_i = +/- z_j.
std::vector<Hyperplane> kink_hyperplanes(const MatrixXd &b, const VectorXd &x) {
  std::vector<Hyperplane> out;
  const Index n = b.rows();
  auto add = [&](VectorXd a, double rhs) {
    const double norm = a.norm();
    if (norm > 1e-12)
      out.push_back({a / norm, rhs / norm});
  };
  for (Index i = 0; i < n; ++i) {
    add(b.row(i).transpose(), x[i]);
    for (Index j = i + 1; j < n; ++j) {
      add((b.row(i) - b.row(j)).transpose(), x[i] - x[j]);
      add((b.row(i) + b.row(j)).transpose(), x[i] + x[j]);
    }
  }
  return out;
}

// Move to the nearest point of intersections of up to dim kink hyperplanes
// close to c; keep the best value.
bool vertex_polish(const Objective &f, VectorXd &c, double &best) {
  const std::vector<Hyperplane> planes = kink_hyperplanes(f.basis(), f.point());
  const std::size_t dim = static_cast<std::size_t>(c.size());
  std::vector<std::size_t> order(planes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto dist = [&](std::size_t k) { return std::fabs(planes[k].a.dot(c) - planes[k].b); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
  const std::size_t k = std::min(order.size(), dim + (dim <= 4 ? 8 : 4));
  bool improved = false;
  VectorXd best_c = c;
  for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
    const std::size_t m = static_cast<std::size_t>(std::popcount(mask));
    if (m > dim)
      continue;
    MatrixXd a(ix(m), ix(dim));
    VectorXd r(ix(m));
    std::size_t row = 0;
    for (std::size_t j = 0; j < k; ++j)
      if ((mask >> j) & 1U) {
        a.row(ix(row)) = planes[order[j]].a.transpose();
        r[ix(row)] = planes[order[j]].b - planes[order[j]].a.dot(c);
        ++row;
      }
    Eigen::FullPivLU<MatrixXd> lu(a * a.transpose());
    lu.setThreshold(1e-12);
    if (static_cast<std::size_t>(lu.rank()) < m)
      continue;
    const VectorXd cand = c + a.transpose() * lu.solve(r);
    const double val = f(cand);
    if (val < best) {
      best = val;
      best_c = cand;
      improved = true;
    }
  }
  c = best_c;
  return improved;
}

// Minimal-norm element of the eps-subdifferential by Frank-Wolfe: within
// each block of eps-tied magnitudes the v-ranks may be permuted, and entries
// below eps take any sign. Returns B^T g for the minimizing g.
VectorXd eps_steepest(const Objective &f, const VectorXd &c, double eps) {
  const MatrixXd &b = f.basis();
  const std::vector<double> &v = f.weights();
  const VectorXd z = f.point() - b * c;
  const std::size_t n = static_cast<std::size_t>(z.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::fabs(z[ix(i)]) > std::fabs(z[ix(j)]); });
  std::size_t m = 0;
  while (m < n && std::fabs(z[ix(order[m])]) > eps)
    ++m;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t s = 0; s < m;) {
    std::size_t e = s + 1;
    while (e < m && std::fabs(z[ix(order[e - 1])]) - std::fabs(z[ix(order[e])]) <= eps)
      ++e;
    blocks.emplace_back(s, e);
    s = e;
  }
  if (m < n)
    blocks.emplace_back(m, n);

  auto lmo = [&](const VectorXd &h) {
    VectorXd g = VectorXd::Zero(ix(n));
    std::vector<std::pair<double, std::size_t>> keys;
    for (const auto &[s, e] : blocks) {
      const bool free_sign = s >= m;
      keys.clear();
      for (std::size_t k = s; k < e; ++k) {
        const std::size_t i = order[k];
        const double key = free_sign ? -std::fabs(h[ix(i)]) : (z[ix(i)] > 0 ? 1.0 : -1.0) * h[ix(i)];
        keys.emplace_back(key, i);
      }
      std::sort(keys.begin(), keys.end());
      for (std::size_t k = 0; k < keys.size(); ++k) {
        const std::size_t i = keys[k].second;
        double sgn = free_sign ? (h[ix(i)] > 0 ? -1.0 : 1.0) : (z[ix(i)] > 0 ? 1.0 : -1.0);
        if (free_sign && keys[k].first == 0.0)
          sgn = 0.0;
        g[ix(i)] = sgn * v[s + k];
      }
    }
    return g;
  };

  VectorXd g = lmo(VectorXd::Zero(ix(n)));
  for (int it = 0; it < 400; ++it) {
    const VectorXd q = b.transpose() * g;
    const VectorXd s = lmo(b * q);
    const VectorXd r = b.transpose() * (s - g);
    const double gap = -q.dot(r);
    if (gap <= 1e-15 * (1.0 + q.squaredNorm()))
      break;
    const double gamma = std::clamp(gap / r.squaredNorm(), 0.0, 1.0);
    g += gamma * (s - g);
  }
  return b.transpose() * g;
}

// eps-steepest descent with a line search on the piecewise-linear restriction.
void eps_descent(const Objective &f, VectorXd &c, double &best, double eps, double eps_min) {
  for (int it = 0; it < 2000 && eps > eps_min; ++it) {
    const VectorXd q = eps_steepest(f, c, eps);
    const double qn = q.norm();
    if (qn <= 1e-13) {
      eps *= 0.1;
      continue;
    }
    const VectorXd d = q / qn;
    auto phi = [&](double t) { return f(c + t * d); };
    double t = eps, lo = 0.0, best_t = 0.0, best_v = best;
    for (int k = 0; k < 60; ++k) {
      const double val = phi(t);
      if (val < best_v) {
        best_v = val;
        lo = best_t;
        best_t = t;
        t *= 2.0;
      } else {
        break;
      }
    }
    if (best_t == 0.0) {
      eps *= 0.1;
      continue;
    }
    double a = lo, bnd = t;
    for (int k = 0; k < 100 && bnd - a > 1e-16 * (1.0 + bnd); ++k) {
      const double m1 = a + (bnd - a) / 3.0, m2 = bnd - (bnd - a) / 3.0;
      if (phi(m1) <= phi(m2))
        bnd = m2;
      else
        a = m1;
    }
    const double mid = 0.5 * (a + bnd);
    if (phi(mid) < best_v) {
      best_v = phi(mid);
      best_t = mid;
    }
    c += best_t * d;
    best = best_v;
  }
}

// Opportunistic pattern search along the axes and fresh random directions.
using DirectionHook = std::function<void(const VectorXd &, double, std::vector<VectorXd> &)>;

template <class F>
void pattern_search(const F &f, VectorXd &c, double &best, double step, double min_step, Rng &rng,
                    std::size_t max_evals, std::size_t random_dirs, const DirectionHook &extra = {}) {
  const Index dim = c.size();
  std::normal_distribution<double> normal;
  std::size_t evals = 0;
  while (step > min_step && evals < max_evals) {
    std::vector<VectorXd> dirs;
    for (Index i = 0; i < dim; ++i) {
      VectorXd e = VectorXd::Zero(dim);
      e[i] = 1.0;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
    for (std::size_t r = 0; r < random_dirs; ++r) {
      VectorXd d(dim);
      for (Index i = 0; i < dim; ++i)
        d[i] = normal(rng);
      dirs.push_back(d / d.norm());
    }
    if (extra)
      extra(c, step, dirs);
    bool moved = false;
    for (const auto &d : dirs) {
      const VectorXd cand = c + step * d;
      const double val = f(cand);
      ++evals;
      if (val < best) {
        best = val;
        c = cand;
        moved = true;
        break;
      }
    }
    step = moved ? step * 2.0 : step * 0.5;
  }
}

VectorXd least_squares(const MatrixXd &b, const VectorXd &x) { return b.colPivHouseholderQr().solve(x); }

void check_projection_inputs(const WeightSpec &w, const Vector &x, const std::vector<Vector> &basis) {
  if (w.p() != 1.0)
    throw std::domain_error("metric projection: requires p = 1");
  if (x.empty() || x.size() > 32)
    throw std::invalid_argument("metric projection: N must lie in [1, 32]");
  if (basis.size() > 8)
    throw std::invalid_argument("metric projection: at most 8 basis vectors");
}

} // namespace

ProjectionResult metric_projection(const WeightSpec &w, const Vector &x, const std::vector<Vector> &basis,
                                   double tol, std::uint64_t seed) {
  check_projection_inputs(w, x, basis);
  const std::size_t n = x.size(), dim = basis.size();
  const MatrixXd b = basis_matrix(basis, n);
  if (matrix_rank(b) != dim)
    throw std::invalid_argument("metric projection: basis is linearly dependent");

  ProjectionResult out;
  VectorXd c = VectorXd::Zero(ix(dim));
  if (dim > 0) {
    const Objective f(v_doubles(w, n), b, to_eigen(x));
    double best = f(c);
    const VectorXd ls = least_squares(b, f.point());
    if (f(ls) < best) {
      best = f(ls);
      c = ls;
    }

    // Polyak steps toward a target below the incumbent; the gap to the target
    // halves whenever progress stalls.
    VectorXd cur = c;
    double delta = std::max(best, 1e-12) * 0.5;
    std::size_t stall = 0;
    const std::size_t max_iter = 400 * (dim + 1);
    for (; out.iterations < max_iter; ++out.iterations) {
      const VectorXd g = f.subgradient(cur);
      const double gn = g.squaredNorm();
      if (gn == 0.0)
        break;
      const double fc = f(cur);
      cur -= ((fc - (best - delta)) / gn) * g;
      const double val = f(cur);
      if (val < best - 1e-15 * std::max(1.0, best)) {
        best = val;
        c = cur;
        stall = 0;
      } else if (++stall >= 20) {
        delta *= 0.5;
        stall = 0;
        cur = c;
        if (delta < 1e-14 * std::max(1.0, best))
          break;
      }
    }

    const double scale0 = std::max(1.0, c.norm());
    eps_descent(f, c, best, 1e-2 * scale0, 1e-13 * scale0);
    for (int round = 0; round < 12; ++round)
      if (!vertex_polish(f, c, best))
        break;
    Rng rng(seed);
    const double scale = std::max(1.0, c.norm());
    pattern_search(f, c, best, 1e-3 * scale, std::max(tol * 1e-3, 1e-15) * scale, rng, 20000, 0);
    for (int round = 0; round < 4; ++round)
      if (!vertex_polish(f, c, best))
        break;
  }

  out.coefficients.assign(c.data(), c.data() + c.size());
  std::vector<Scalar> residual(n);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar r = x[i].is_exact() ? x[i] : Scalar::exact_from_double(x[i].to_double());
    for (std::size_t j = 0; j < dim; ++j) {
      const Scalar bij = basis[j][i].is_exact() ? basis[j][i] : Scalar::exact_from_double(basis[j][i].to_double());
      r = r - Scalar::exact_from_double(c[ix(j)]) * bij;
    }
    residual[i] = r;
  }
  out.distance = norm_gamma(w, Sequence(std::move(residual)));
  out.oracle_gap = out.distance.to_double() - projection_oracle(w, x, basis, seed);
  return out;
}

double projection_oracle(const WeightSpec &w, const Vector &x, const std::vector<Vector> &basis,
                         std::uint64_t seed, std::size_t starts) {
  check_projection_inputs(w, x, basis);
  const std::size_t n = x.size(), dim = basis.size();
  const MatrixXd b = basis_matrix(basis, n);
  const VectorXd xd = to_eigen(x);
  std::vector<double> wd(n);
  for (std::size_t i = 0; i < n; ++i)
    wd[i] = w.at(i + 1).to_double();
  const double tail = derived_v(w, n + 1).to_double();

  // sum_{n <= N} x**(n) w(n) + S(N) sum_{n > N} w(n) / n
  auto f = [&](const VectorXd &c) {
    const VectorXd z = xd - b * c;
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i)
      a[i] = std::fabs(z[ix(i)]);
    std::sort(a.begin(), a.end(), std::greater<>());
    double s = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += a[i];
      total += s / static_cast<double>(i + 1) * wd[i];
    }
    return total + s * tail;
  };
  if (dim == 0)
    return f(VectorXd());

  // Directions along intersections of the kink hyperplanes passing within a
  // few steps of c, so the search can follow ridges of the objective.
  const std::vector<Hyperplane> planes = kink_hyperplanes(b, xd);
  const DirectionHook ridges = [&](const VectorXd &c, double step, std::vector<VectorXd> &dirs) {
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t k = 0; k < planes.size(); ++k) {
      const double d = std::fabs(planes[k].a.dot(c) - planes[k].b);
      if (d <= 4.0 * step)
        near.emplace_back(d, k);
    }
    std::sort(near.begin(), near.end());
    near.resize(std::min<std::size_t>(near.size(), 10));
    const std::size_t k = near.size();
    for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
      const std::size_t m = static_cast<std::size_t>(std::popcount(mask));
      if (m >= dim)
        continue;
      MatrixXd a(ix(m), ix(dim));
      std::size_t row = 0;
      for (std::size_t j = 0; j < k; ++j)
        if ((mask >> j) & 1U)
          a.row(ix(row++)) = planes[near[j].second].a.transpose();
      Eigen::FullPivLU<MatrixXd> lu(a);
      lu.setThreshold(1e-10);
      const MatrixXd ker = lu.kernel();
      if (ker.cols() == 0 || ker.norm() == 0.0)
        continue;
      for (Index col = 0; col < ker.cols(); ++col) {
        const VectorXd d = ker.col(col).normalized();
        dirs.push_back(d);
        dirs.push_back(-d);
      }
    }
  };

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  const VectorXd ls = least_squares(b, xd);
  const double scale = ls.norm() + 1.0;
  double overall = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    VectorXd c = ls;
    if (s == 1)
      c.setZero();
    else if (s > 1)
      for (Index i = 0; i < c.size(); ++i)
        c[i] += scale * normal(rng);
    double best = f(c);
    pattern_search(f, c, best, scale, 1e-13 * scale, rng, 40000, 2 * dim + 2, ridges);
    overall = std::min(overall, best);
  }
  return overall;
}

namespace {

struct ExtremeTables {
  std::vector<double> v, v_err;
  std::vector<double> phi, phi_err;
  std::vector<std::size_t> lengths;
};

ExtremeTables extreme_tables(const WeightSpec &w, std::size_t n) {
  ExtremeTables t;
  for (const auto &c : derived_v_table(w, n)) {
    t.v.push_back(c.to_double());
    t.v_err.push_back(c.error + rounding_allowance(c.to_double()));
  }
  t.phi.push_back(0.0);
  t.phi_err.push_back(0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const CertifiedValue f = phi(w, k);
    t.phi.push_back(f.to_double());
    t.phi_err.push_back(f.error + rounding_allowance(f.to_double()));
    if (k == 1 || W(w, k - 1).value.sign() > 0)
      t.lengths.push_back(k);
  }
  return t;
}

// Calls visit(n0, columns, signs) for every signed indicator of an admissible size.
template <class F> void for_each_signed_indicator(const ExtremeTables &t, std::size_t n, F &&visit) {
  std::vector<std::size_t> cols;
  std::vector<int> signs;
  for (std::size_t n0 : t.lengths)
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n0)
        continue;
      cols.clear();
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1U)
          cols.push_back(i);
      signs.assign(n0, 1);
      for (std::uint32_t s = 0; s < (1U << n0); ++s) {
        for (std::size_t j = 0; j < n0; ++j)
          signs[j] = ((s >> j) & 1U) ? -1 : 1;
        visit(n0, cols, signs);
      }
    }
}

// max ||Pe|| in double arithmetic, with a bound on the accumulated error.
std::pair<double, double> float_operator_norm(const ExtremeTables &t, const MatrixXd &p) {
  const std::size_t n = static_cast<std::size_t>(p.rows());
  double best = 0.0, best_err = 0.0;
  VectorXd u(p.rows());
  const double v_err = t.v_err.empty() ? 0.0 : *std::max_element(t.v_err.begin(), t.v_err.end());
  for_each_signed_indicator(t, n, [&](std::size_t n0, const std::vector<std::size_t> &cols,
                                      const std::vector<int> &signs) {
    u.setZero();
    for (std::size_t j = 0; j < cols.size(); ++j)
      u += signs[j] * p.col(ix(cols[j]));
    const double num = sorted_dot(t.v, u);
    const double val = num / t.phi[n0];
    if (val > best) {
      best = val;
      best_err = (u.cwiseAbs().sum() * v_err + rounding_allowance(num, 4.0 * static_cast<double>(n))) / t.phi[n0] +
                 val * t.phi_err[n0] / t.phi[n0];
    }
  });
  return {best, best_err};
}

// Every image P sigma is majorized by the indicator of size n0, and some image
// is a signed indicator of size n0.
bool certify_norm_one(const ExtremeTables &t, const Matrix &p) {
  const std::size_t n = p.size();
  bool majorized = true, attained = false;
  std::vector<Rational> u(n);
  for_each_signed_indicator(t, n, [&](std::size_t n0, const std::vector<std::size_t> &cols,
                                      const std::vector<int> &signs) {
    if (!majorized)
      return;
    for (std::size_t r = 0; r < n; ++r) {
      Rational s(0);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const Rational &e = p[r][cols[j]].rational();
        if (sgn(e) != 0) {
          if (signs[j] > 0)
            s += e;
          else
            s -= e;
        }
      }
      u[r] = abs(s);
    }
    std::sort(u.begin(), u.end(), [](const Rational &a, const Rational &b) { return a > b; });
    Rational partial(0);
    std::size_t units = 0;
    for (std::size_t k = 0; k < n; ++k) {
      partial += u[k];
      if (partial > Rational(static_cast<long>(std::min(k + 1, n0)))) {
        majorized = false;
        return;
      }
      if (u[k] == 1)
        ++units;
    }
    if (units == n0 && partial == Rational(static_cast<long>(n0)))
      attained = true;
  });
  return majorized && attained;
}

void check_operator_inputs(const WeightSpec &w, std::size_t n, const char *what) {
  if (w.p() != 1.0)
    throw std::domain_error(std::string(what) + ": requires p = 1");
  if (!W_inf_class(w).infinite)
    throw RegimeError(std::string(what) + ": requires W(infinity) = infinity");
  if (n == 0 || n > 12)
    throw std::invalid_argument(std::string(what) + ": N must lie in [1, 12]");
}

} // namespace

CertifiedValue operator_norm_via_extremes(const WeightSpec &w, std::size_t n, const Matrix &p) {
  check_operator_inputs(w, n, "operator_norm_via_extremes");
  const MatrixXd pd = to_eigen(p, n);
  const bool exact = all_exact(p);
  if (exact && std::all_of(p.begin(), p.end(), [](const auto &row) {
        return std::all_of(row.begin(), row.end(), [](const Scalar &e) { return e.is_zero(); });
      }))
    return CertifiedValue(0);
  const ExtremeTables t = extreme_tables(w, n);
  const auto [value, err] = float_operator_norm(t, pd);
  if (exact && value <= 1.0 + 1e-9 && certify_norm_one(t, p))
    return CertifiedValue(1);
  return CertifiedValue(Scalar::from_double(value), err);
}

Verdict is_norm_one_projection(const WeightSpec &w, std::size_t n, const Matrix &p,
                               const std::vector<Vector> &basis) {
  check_operator_inputs(w, n, "is_norm_one_projection");
  const MatrixXd pd = to_eigen(p, n);
  const bool exact = all_exact(p);
  Verdict out;

  bool idempotent = true;
  if (exact) {
    for (std::size_t r = 0; r < n && idempotent; ++r)
      for (std::size_t c = 0; c < n && idempotent; ++c) {
        Scalar s(0);
        for (std::size_t k = 0; k < n; ++k)
          s = s + p[r][k] * p[k][c];
        idempotent = s == p[r][c];
      }
  } else {
    idempotent = (pd * pd - pd).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, pd.cwiseAbs().maxCoeff());
  }
  out.conditions.push_back({"P^2 = P", idempotent});

  bool fixes = true;
  for (const auto &bv : basis) {
    if (bv.size() != n)
      throw std::invalid_argument("is_norm_one_projection: basis vectors must have length N");
    const bool exact_b = std::all_of(bv.begin(), bv.end(), [](const Scalar &s) { return s.is_exact(); });
    if (exact && exact_b) {
      for (std::size_t r = 0; r < n && fixes; ++r) {
        Scalar s(0);
        for (std::size_t k = 0; k < n; ++k)
          s = s + p[r][k] * bv[k];
        fixes = s == bv[r];
      }
    } else {
      const VectorXd bd = to_eigen(bv);
      fixes = fixes && (pd * bd - bd).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, bd.cwiseAbs().maxCoeff());
    }
  }
  out.conditions.push_back({"P b = b on the basis", fixes});

  const MatrixXd b = basis.empty() ? MatrixXd(ix(n), 0) : basis_matrix(basis, n);
  const bool range = matrix_rank(pd) == basis.size() && matrix_rank(b) == basis.size();
  out.conditions.push_back({"range(P) = span(basis)", range});

  const CertifiedValue norm = operator_norm_via_extremes(w, n, p);
  const bool unit = norm.exact() ? norm.value == Scalar(1) : std::fabs(norm.to_double() - 1.0) <= 1e-9 + norm.error;
  out.conditions.push_back({"||P|| = 1", unit});

  static const char *tags[] = {"P^2 != P", "P b != b", "range(P) != span(basis)", "||P|| != 1"};
  for (std::size_t k = 0; k < out.conditions.size(); ++k)
    if (!out.conditions[k].holds) {
      out.failed = tags[k];
      return out;
    }
  out.result = true;
  return out;
}

Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i)
    m[i][i] = Scalar(1);
  return m;
}

Matrix coordinate_projection(std::size_t n, const std::vector<std::size_t> &coords) {
  Matrix m(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t c : coords) {
    if (c == 0 || c > n)
      throw std::invalid_argument("coordinate_projection: coordinates are 1-based and at most N");
    m[c - 1][c - 1] = Scalar(1);
  }
  return m;
}

namespace {

// Exact (or float, for float entries) inverse by Gauss-Jordan; empty when singular.
std::optional<Matrix> invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv = identity_matrix(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero())
      ++piv;
    if (piv == n)
      return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Scalar d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] = a[col][k] / d;
      inv[col][k] = inv[col][k] / d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero())
        continue;
      const Scalar f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] = a[r][k] - f * a[col][k];
        inv[r][k] = inv[r][k] - f * inv[col][k];
      }
    }
  }
  return inv;
}

Matrix from_eigen(const MatrixXd &m) {
  Matrix out(static_cast<std::size_t>(m.rows()), std::vector<Scalar>(static_cast<std::size_t>(m.cols())));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = Scalar::from_double(m(r, c));
  return out;
}

// B (B^T B)^{-1} B^T, exact for exact bases
Matrix orthogonal_projection(const std::vector<Vector> &basis, std::size_t n) {
  const std::size_t dim = basis.size();
  Matrix gram(dim, std::vector<Scalar>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Scalar s(0);
      for (std::size_t k = 0; k < n; ++k)
        s = s + basis[i][k] * basis[j][k];
      gram[i][j] = s;
    }
  const Matrix ginv = *invert(gram);
  Matrix p(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Scalar s(0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          s = s + basis[i][r] * ginv[i][j] * basis[j][c];
      p[r][c] = s;
    }
  return p;
}

// B (B_S)^{-1} E_S^T
std::optional<Matrix> coordinate_candidate(const std::vector<Vector> &basis, std::size_t n,
                                           const std::vector<std::size_t> &rows) {
  const std::size_t dim = basis.size();
  Matrix bs(dim, std::vector<Scalar>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      bs[i][j] = basis[j][rows[i]];
  const auto inv = invert(bs);
  if (!inv)
    return std::nullopt;
  Matrix p(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < dim; ++i) {
      Scalar s(0);
      for (std::size_t j = 0; j < dim; ++j)
        s = s + basis[j][r] * (*inv)[j][i];
      p[r][rows[i]] = s;
    }
  return p;
}

} // namespace

ExistenceReport existence_set_probe(const WeightSpec &w, std::size_t n, const std::vector<Vector> &basis,
                                    std::size_t trials, std::uint64_t seed) {
  check_operator_inputs(w, n, "existence_set_probe");
  const std::size_t dim = basis.size();
  if (dim == 0 || dim > n)
    throw std::invalid_argument("existence_set_probe: need 1 <= dim <= N");
  const MatrixXd b = basis_matrix(basis, n);
  if (matrix_rank(b) != dim)
    throw std::invalid_argument("existence_set_probe: basis is linearly dependent");

  ExistenceReport out;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, t));
    Vector x(n);
    for (auto &e : x)
      e = random_rational(rng, 6, 4);
    const ProjectionResult r = metric_projection(w, x, basis, 1e-9, trial_seed(seed, t));
    ++out.samples;
    if (!r.distance.is_infinite())
      ++out.attained;
    out.max_oracle_gap = std::max(out.max_oracle_gap, r.oracle_gap.value_or(0.0));
  }

  const ExtremeTables tables = extreme_tables(w, n);
  auto score = [&](const MatrixXd &p) { return float_operator_norm(tables, p).first; };

  Matrix best;
  MatrixXd best_d;
  double best_score = std::numeric_limits<double>::infinity();

  // coordinate candidates, capped so large N stays tractable
  const double per_eval = std::pow(3.0, static_cast<double>(n)) * static_cast<double>(n * n);
  const std::size_t cap = static_cast<std::size_t>(std::max(8.0, 5e7 / per_eval));
  std::size_t tried = 0;
  for (std::uint32_t mask = 0; mask < (1U << n) && tried < cap; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != dim)
      continue;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U)
        rows.push_back(i);
    const auto cand = coordinate_candidate(basis, n, rows);
    if (!cand)
      continue;
    ++tried;
    const MatrixXd cd = to_eigen(*cand, n);
    const double s = score(cd);
    if (s < best_score - 1e-12) {
      best_score = s;
      best = *cand;
      best_d = cd;
    }
  }

  // the orthogonal projection replaces the coordinate ones only when strictly better
  {
    const Matrix orth = orthogonal_projection(basis, n);
    const MatrixXd od = to_eigen(orth, n);
    const double so = score(od);
    if (so < best_score - 1e-12) {
      best_score = so;
      best_d = od;
      best = orth;
    }
  }

  // P = B (L0^T + Z K^T) with K spanning the orthogonal complement of span(B)
  if (dim < n && best_score > 1.0 + 1e-12) {
    const MatrixXd l0t = (b.transpose() * b).inverse() * b.transpose() * best_d;
    Eigen::FullPivLU<MatrixXd> lu(b.transpose());
    const MatrixXd k = lu.kernel();
    const Index zsize = ix(dim) * k.cols();
    auto build = [&](const VectorXd &z) {
      const MatrixXd zm = Eigen::Map<const MatrixXd>(z.data(), ix(dim), k.cols());
      return MatrixXd(b * (l0t + zm * k.transpose()));
    };
    VectorXd z = VectorXd::Zero(zsize);
    double s = best_score;
    Rng rng(seed);
    pattern_search([&](const VectorXd &zz) { return score(build(zz)); }, z, s, 0.25, 1e-9, rng,
                   std::max<std::size_t>(200, 20 * static_cast<std::size_t>(zsize)), 2);
    if (s < best_score - 1e-12) {
      best_score = s;
      best_d = build(z);
      best = from_eigen(best_d);
    }
  }

  out.best_projection = best;
  out.best_norm = operator_norm_via_extremes(w, n, best);
  out.certified_one = out.best_norm.exact() && out.best_norm.value == Scalar(1);
  return out;
}

} // namespace lorentz
