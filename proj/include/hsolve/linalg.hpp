#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsolve/sparse.hpp"

namespace hsolve {

/// Row-major dense matrix. Only meant for small oracle computations.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t n_rows, std::size_t n_cols, double fill = 0.0)
      : n_rows_(n_rows), n_cols_(n_cols), values_(n_rows * n_cols, fill) {}

  static DenseMatrix from_sparse(const SparseMatrix& a);

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_cols_ + j];
  }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> values_;
};

/// Partial-pivoting LU solve. Throws SingularMatrixError on a zero pivot.
Vector dense_lu_solve(DenseMatrix a, std::span<const double> b);

/// Banded LU with partial pivoting (LAPACK gbtrf layout in row form).
///
/// The upper factor has bandwidth lower_bw + upper_bw because row swaps can
/// pull entries in from up to lower_bw rows below.
class BandedLU {
 public:
  BandedLU() = default;
  /// Bandwidths are taken from the pattern of `a`.
  explicit BandedLU(const SparseMatrix& a);

  std::size_t size() const { return n_; }
  std::size_t lower_bandwidth() const { return kl_; }
  std::size_t upper_bandwidth() const { return ku_; }

  Vector solve(std::span<const double> b) const;
  void solve_in_place(std::span<double> x) const;

 private:
  std::size_t width() const { return 2 * kl_ + ku_ + 1; }
  double& u(std::size_t i, std::size_t j) { return band_[i * width() + (j + kl_ - i)]; }
  double u(std::size_t i, std::size_t j) const {
    return band_[i * width() + (j + kl_ - i)];
  }

  std::size_t n_ = 0;
  std::size_t kl_ = 0;
  std::size_t ku_ = 0;
  std::vector<double> band_;
  std::vector<double> multipliers_;  // n * kl, column-wise L entries
  std::vector<std::size_t> pivots_;
};

inline BandedLU banded_factor(const SparseMatrix& a) { return BandedLU(a); }
inline Vector banded_solve(const BandedLU& f, std::span<const double> b) {
  return f.solve(b);
}

/// Zero-fill incomplete LU in natural ordering. L has unit diagonal and is
/// stored together with U on the pattern of the input matrix.
class ILU0Factors {
 public:
  ILU0Factors() = default;
  /// Throws SingularMatrixError carrying the row index on a zero pivot.
  explicit ILU0Factors(const SparseMatrix& a);

  /// Strict lower part is L (unit diagonal implied), upper part is U.
  const SparseMatrix& combined() const { return lu_; }

  Vector apply(std::span<const double> r) const;
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  SparseMatrix lu_;
  std::vector<std::size_t> diag_;
};

inline ILU0Factors ilu0_factor(const SparseMatrix& a) { return ILU0Factors(a); }
inline Vector ilu0_apply(const ILU0Factors& f, std::span<const double> r) {
  return f.apply(r);
}

}  // namespace hsolve
