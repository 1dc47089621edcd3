#include "hsolve/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hsolve/error.hpp"

namespace hsolve {

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) d(i, cols[p]) = vals[p];
  }
  return d;
}

Vector dense_lu_solve(DenseMatrix a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw DimensionError("dense_lu_solve: dimension mismatch");
  }
  Vector x(b.begin(), b.end());
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (std::abs(a(p, k)) <= 1e3 * std::numeric_limits<double>::epsilon() * scale) {
      throw SingularMatrixError(
          "dense_lu_solve: matrix singular to working precision at column " +
              std::to_string(k),
          k);
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(x[k], x[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a(i, k) / a(k, k);
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
      x[i] -= m * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

BandedLU::BandedLU(const SparseMatrix& a)
    : n_(a.rows()), kl_(a.lower_bandwidth()), ku_(a.upper_bandwidth()) {
  if (a.rows() != a.cols()) throw DimensionError("BandedLU: matrix not square");
  band_.assign(n_ * width(), 0.0);
  multipliers_.assign(n_ * kl_, 0.0);
  pivots_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) u(i, cols[p]) = vals[p];
  }

  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t last_row = std::min(n_ - 1, i + kl_);
    const std::size_t last_col = std::min(n_ - 1, i + kl_ + ku_);
    std::size_t piv = i;
    for (std::size_t r = i + 1; r <= last_row; ++r)
      if (std::abs(u(r, i)) > std::abs(u(piv, i))) piv = r;
    if (u(piv, i) == 0.0) {
      throw SingularMatrixError(
          "BandedLU: zero pivot at row " + std::to_string(i), i);
    }
    pivots_[i] = piv;
    if (piv != i) {
      for (std::size_t j = i; j <= last_col; ++j) std::swap(u(i, j), u(piv, j));
    }
    const double pivot = u(i, i);
    for (std::size_t r = i + 1; r <= last_row; ++r) {
      const double m = u(r, i) / pivot;
      multipliers_[i * kl_ + (r - i - 1)] = m;
      u(r, i) = 0.0;
      if (m == 0.0) continue;
      for (std::size_t j = i + 1; j <= last_col; ++j) u(r, j) -= m * u(i, j);
    }
  }
}

void BandedLU::solve_in_place(std::span<double> x) const {
  if (x.size() != n_) throw DimensionError("BandedLU::solve: dimension mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    std::swap(x[i], x[pivots_[i]]);
    const std::size_t last_row = std::min(n_ - 1, i + kl_);
    for (std::size_t r = i + 1; r <= last_row; ++r) {
      x[r] -= multipliers_[i * kl_ + (r - i - 1)] * x[i];
    }
  }
  for (std::size_t i = n_; i-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, i + kl_ + ku_);
    double s = x[i];
    for (std::size_t j = i + 1; j <= last_col; ++j) s -= u(i, j) * x[j];
    x[i] = s / u(i, i);
  }
}

Vector BandedLU::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

ILU0Factors::ILU0Factors(const SparseMatrix& a) : lu_(a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("ILU0: matrix not square");
  const auto offsets = lu_.row_offsets();
  const auto cols = lu_.col_indices();
  auto vals = lu_.values();
  diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag_[i] = lu_.find(i, i);
    if (diag_[i] == lu_.nnz()) {
      throw SingularMatrixError("ILU0: missing diagonal entry in row " +
                                    std::to_string(i),
                                i);
    }
  }

  // IKJ variant restricted to the pattern.
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(n, kAbsent);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) pos[cols[p]] = p;
    for (std::size_t p = offsets[i]; p < offsets[i + 1] && cols[p] < i; ++p) {
      const std::size_t k = cols[p];
      const double pivot = vals[diag_[k]];
      if (pivot == 0.0) {
        throw SingularMatrixError("ILU0: zero pivot in row " + std::to_string(k), k);
      }
      const double m = vals[p] / pivot;
      vals[p] = m;
      for (std::size_t q = diag_[k] + 1; q < offsets[k + 1]; ++q) {
        const std::size_t target = pos[cols[q]];
        if (target != kAbsent) vals[target] -= m * vals[q];
      }
    }
    if (vals[diag_[i]] == 0.0) {
      throw SingularMatrixError("ILU0: zero pivot in row " + std::to_string(i), i);
    }
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) pos[cols[p]] = kAbsent;
  }
}

void ILU0Factors::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = lu_.rows();
  if (r.size() != n || z.size() != n) {
    throw DimensionError("ILU0::apply: dimension mismatch");
  }
  const auto offsets = lu_.row_offsets();
  const auto cols = lu_.col_indices();
  const auto vals = lu_.values();
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::size_t p = offsets[i]; p < diag_[i]; ++p) s -= vals[p] * z[cols[p]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (std::size_t p = diag_[i] + 1; p < offsets[i + 1]; ++p) s -= vals[p] * z[cols[p]];
    z[i] = s / vals[diag_[i]];
  }
}

Vector ILU0Factors::apply(std::span<const double> r) const {
  Vector z(r.size());
  apply(r, z);
  return z;
}

}  // namespace hsolve
