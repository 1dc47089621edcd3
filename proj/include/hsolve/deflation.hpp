#pragma once

#include <cstddef>
#include <span>

#include "hsolve/decomposition.hpp"
#include "hsolve/error.hpp"
#include "hsolve/krylov.hpp"
#include "hsolve/linalg.hpp"
#include "hsolve/sparse.hpp"

namespace hsolve {

/// Raised when a subdomain is too small for the 5-point coarse stencil.
class SubdomainTooSmall : public SizingError {
 public:
  using SizingError::SizingError;
};

/// n x floor(n/2) prolongation. Column c (0-based) holds the weights
/// [1 4 6 4 1] / 8 on fine rows 2c-1 .. 2c+3, entries outside [0, n) dropped.
SparseMatrix build_deflation_1d(std::size_t n);

/// Z^y kron Z^x for a lexicographically ordered nx x ny block (x fastest).
SparseMatrix build_deflation_2d(std::size_t nx, std::size_t ny);

/// Prepared two-level deflation for one subdomain matrix A_j:
/// Q = Z E^{-1} Z^T with E = Z^T A_j Z, and P = I - A_j Q.
///
/// The context keeps A_j Z but not A_j itself; callers pass the same A_j the
/// context was built from.
class DeflationContext {
 public:
  /// Arbitrary deflation basis, including one with zero columns.
  static DeflationContext from_basis(const SparseMatrix& a_j, SparseMatrix z,
                                     std::size_t id = 0);

  std::size_t id() const { return id_; }
  std::size_t fine_size() const { return z_.rows(); }
  std::size_t coarse_size() const { return z_.cols(); }
  std::size_t n_cx = 0;
  std::size_t n_cy = 0;

  const SparseMatrix& z() const { return z_; }
  const SparseMatrix& zt() const { return zt_; }
  const SparseMatrix& coarse_operator() const { return e_; }

  /// out = P y = y - A Z E^{-1} Z^T y
  void apply_projector(std::span<const double> y, std::span<double> out) const;
  /// out = Q y = Z E^{-1} Z^T y
  void apply_coarse_correction(std::span<const double> y, std::span<double> out) const;
  /// out = P A v, one coarse solve.
  void apply_deflated_operator(const SparseMatrix& a_j, std::span<const double> v,
                               std::span<double> out) const;

 private:
  std::size_t id_ = 0;
  SparseMatrix z_;
  SparseMatrix zt_;
  SparseMatrix az_;
  SparseMatrix e_;
  BandedLU e_factor_;
};

/// Throws SubdomainTooSmall when either axis is below 4 nodes and
/// SingularMatrixError (naming the subdomain) when E cannot be factorised.
DeflationContext build_context(const LocalSystem& local);

Vector apply_deflated_operator(const DeflationContext& ctx, const SparseMatrix& a_j,
                               std::span<const double> v);

/// Which norm the inner tolerance is relative to: ||P f|| (the deflated system
/// right-hand side) or ||f||.
enum class DeflatedNorm { deflated, original };

struct DeflatedSolveResult {
  Vector u;
  /// Report of the GMRES run on P A x = P f.
  SolveReport report;
  /// ||f - A u|| / ||f|| after reconstruction.
  double true_relative_residual = 0.0;
};

/// Unpreconditioned GMRES on P A x = P f followed by
/// u = Q f + (I - Q A) x.
DeflatedSolveResult solve_deflated(const DeflationContext& ctx, const SparseMatrix& a_j,
                                   std::span<const double> f, const SolverConfig& cfg,
                                   DeflatedNorm norm = DeflatedNorm::original);

}  // namespace hsolve
