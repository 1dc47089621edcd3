#include "hsolve/krylov.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hsolve/error.hpp"

namespace hsolve {

LinearOperator as_operator(const SparseMatrix& a) {
  return [&a](std::span<const double> x, std::span<double> y) { spmv(a, x, y); };
}

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("SolverConfig: rel_tol must lie in (0, 1)");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  }
}

Arnoldi::Arnoldi(const LinearOperator& a, const LinearOperator& m, bool flexible,
                 std::span<const double> r0)
    : a_(a), m_(m), flexible_(flexible), beta_(norm2(r0)), work_(r0.size()) {
  Vector v0(r0.begin(), r0.end());
  if (beta_ > 0.0)
    for (double& x : v0) x /= beta_;
  v_.push_back(std::move(v0));
}

bool Arnoldi::step() {
  const std::size_t j = columns_.size();
  const std::size_t n = work_.size();
  const Vector& vj = v_[j];

  Vector zj;
  if (m_) {
    zj.resize(n);
    m_(vj, zj);
  } else {
    zj = vj;
  }
  Vector w(n);
  a_(zj, w);
  if (flexible_) z_.push_back(std::move(zj));

  const double w_norm = norm2(w);
  Vector h(j + 2, 0.0);
  for (std::size_t i = 0; i <= j; ++i) {
    h[i] = dot(w, v_[i]);
    axpy(-h[i], v_[i], w);
  }
  h[j + 1] = norm2(w);
  columns_.push_back(h);

  const bool breakdown = !(h[j + 1] > 1e-14 * w_norm);
  if (!breakdown) {
    for (double& x : w) x /= h[j + 1];
  }
  v_.push_back(std::move(w));
  return !breakdown;
}

DenseMatrix Arnoldi::hessenberg() const {
  const std::size_t k = columns_.size();
  DenseMatrix h(k + 1, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < columns_[j].size(); ++i) h(i, j) = columns_[j][i];
  return h;
}

namespace {

struct Givens {
  double c = 1.0;
  double s = 0.0;
};

Givens make_rotation(double a, double b) {
  if (b == 0.0) return {1.0, 0.0};
  const double r = std::hypot(a, b);
  return {a / r, b / r};
}

SolveResult solve_impl(const LinearOperator& a, const LinearOperator& m,
                       std::span<const double> b, std::span<const double> x0,
                       const SolverConfig& cfg, bool flexible) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  if (x0.size() != n) throw DimensionError("gmres: initial guess size mismatch");

  SolveResult result;
  SolveReport& rep = result.report;
  auto finish = [&]() {
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(result);
  };

  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    result.x.assign(n, 0.0);
    rep.converged = true;
    rep.relative_residuals.push_back(0.0);
    return finish();
  }

  result.x.assign(x0.begin(), x0.end());
  Vector r(n);
  auto true_residual = [&]() {
    a(result.x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  double r_norm = true_residual();
  rep.relative_residuals.push_back(r_norm / b_norm);
  rep.final_true_relative_residual = r_norm / b_norm;
  const double target = cfg.rel_tol * b_norm;
  if (r_norm <= target) {
    rep.converged = true;
    return finish();
  }

  while (rep.iterations < cfg.max_iterations) {
    Arnoldi arnoldi(a, m, flexible, r);
    std::vector<Givens> rotations;
    std::vector<Vector> rcols;  // rotated Hessenberg columns (upper triangular)
    Vector g{r_norm};

    while (rep.iterations < cfg.max_iterations &&
           (cfg.restart == 0 || arnoldi.steps() < cfg.restart)) {
      const bool ok = arnoldi.step();
      const std::size_t j = arnoldi.steps() - 1;
      Vector col = arnoldi.hessenberg_columns()[j];
      for (std::size_t i = 0; i < j; ++i) {
        const double t = rotations[i].c * col[i] + rotations[i].s * col[i + 1];
        col[i + 1] = -rotations[i].s * col[i] + rotations[i].c * col[i + 1];
        col[i] = t;
      }
      const Givens rot = make_rotation(col[j], col[j + 1]);
      col[j] = rot.c * col[j] + rot.s * col[j + 1];
      col[j + 1] = 0.0;
      rotations.push_back(rot);
      g.push_back(-rot.s * g[j]);
      g[j] = rot.c * g[j];
      rcols.push_back(std::move(col));

      ++rep.iterations;
      const double estimate = std::abs(g[j + 1]);
      rep.relative_residuals.push_back(estimate / b_norm);
      if (estimate <= target || !ok) break;
    }

    // Back substitution for the least-squares coefficients.
    const std::size_t k = rcols.size();
    Vector y(k);
    for (std::size_t i = k; i-- > 0;) {
      double s = g[i];
      for (std::size_t jj = i + 1; jj < k; ++jj) s -= rcols[jj][i] * y[jj];
      y[i] = rcols[i][i] != 0.0 ? s / rcols[i][i] : 0.0;
    }
    if (flexible) {
      const auto& z = arnoldi.preconditioned_basis();
      for (std::size_t i = 0; i < k; ++i) axpy(y[i], z[i], result.x);
    } else {
      Vector update(n, 0.0);
      const auto& v = arnoldi.basis();
      for (std::size_t i = 0; i < k; ++i) axpy(y[i], v[i], update);
      if (m) {
        Vector mu(n);
        m(update, mu);
        update.swap(mu);
      }
      axpy(1.0, update, result.x);
    }

    r_norm = true_residual();
    rep.final_true_relative_residual = r_norm / b_norm;
    if (r_norm <= target) {
      rep.converged = true;
      break;
    }
    if (k == 0) break;
  }
  return finish();
}

}  // namespace

SolveResult gmres(const LinearOperator& a, const LinearOperator& m,
                  std::span<const double> b, std::span<const double> x0,
                  const SolverConfig& cfg) {
  return solve_impl(a, m, b, x0, cfg, false);
}

SolveResult fgmres(const LinearOperator& a, const LinearOperator& m,
                   std::span<const double> b, std::span<const double> x0,
                   const SolverConfig& cfg) {
  return solve_impl(a, m, b, x0, cfg, true);
}

}  // namespace hsolve
