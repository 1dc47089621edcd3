#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hsolve/linalg.hpp"
#include "hsolve/sparse.hpp"

namespace hsolve {

/// y = Op(x). Output is fully overwritten.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

LinearOperator as_operator(const SparseMatrix& a);

struct SolverConfig {
  double rel_tol = 1e-6;
  std::size_t max_iterations = 10000;
  /// Arnoldi steps per cycle; 0 means unrestarted.
  std::size_t restart = 0;

  /// Throws std::invalid_argument unless rel_tol in (0, 1) and max_iterations >= 1.
  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  bool converged = false;
  /// Least-squares residual estimate / ||b|| per iteration, entry 0 included.
  std::vector<double> relative_residuals;
  double final_true_relative_residual = 0.0;
  double wall_time = 0.0;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Arnoldi process with modified Gram-Schmidt for the right preconditioned
/// operator A M^{-1}. In flexible mode the preconditioned directions
/// z_j = M_j^{-1} v_j are kept.
class Arnoldi {
 public:
  Arnoldi(const LinearOperator& a, const LinearOperator& m, bool flexible,
          std::span<const double> r0);

  /// Adds one basis vector. Returns false on breakdown (h_{j+1,j} == 0 up to
  /// rounding), in which case the Krylov space is invariant.
  bool step();

  std::size_t steps() const { return columns_.size(); }
  double beta() const { return beta_; }
  const std::vector<Vector>& basis() const { return v_; }
  const std::vector<Vector>& preconditioned_basis() const { return z_; }
  /// Column j holds h_{0..j+1, j}.
  const std::vector<Vector>& hessenberg_columns() const { return columns_; }
  /// The (steps+1) x steps upper Hessenberg matrix.
  DenseMatrix hessenberg() const;

 private:
  const LinearOperator& a_;
  const LinearOperator& m_;
  bool flexible_;
  double beta_;
  std::vector<Vector> v_;
  std::vector<Vector> z_;
  std::vector<Vector> columns_;
  Vector work_;
};

/// Right preconditioned GMRES; `m` must be a fixed linear operator (empty
/// function means identity). Convergence is judged on ||b - A x|| / ||b||.
SolveResult gmres(const LinearOperator& a, const LinearOperator& m,
                  std::span<const double> b, std::span<const double> x0,
                  const SolverConfig& cfg);

/// Flexible GMRES; `m` may change from one call to the next.
SolveResult fgmres(const LinearOperator& a, const LinearOperator& m,
                   std::span<const double> b, std::span<const double> x0,
                   const SolverConfig& cfg);

}  // namespace hsolve
