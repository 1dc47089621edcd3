#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hsolve {

using Vector = std::vector<double>;

/// A single (row, col, value) contribution; duplicates are summed on assembly.
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Real sparse matrix in compressed sparse row layout.
///
/// Column indices are strictly increasing within each row. Explicit zeros are
/// allowed (they are part of the pattern, which matters for ILU(0)).
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t n_rows, std::size_t n_cols,
               std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Sums duplicate entries; keeps explicit zeros that were supplied.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix zero(std::size_t n_rows, std::size_t n_cols);

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Column indices / values of one row.
  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {col_indices_.data() + row_offsets_[i],
            row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_offsets_[i],
            row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// Entry lookup by binary search; 0 outside the pattern.
  double at(std::size_t i, std::size_t j) const;
  /// Position of (i, j) in values(), or nnz() when not stored.
  std::size_t find(std::size_t i, std::size_t j) const;

  SparseMatrix transpose() const;

  /// Lower/upper half-bandwidths of the stored pattern.
  std::size_t lower_bandwidth() const;
  std::size_t upper_bandwidth() const;

 private:
  void validate() const;

  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// y = A x, accumulated in row order.
Vector spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// C = A B with a symbolic pass followed by a numeric pass; rows sorted.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// Zt A Z, with Zt supplied explicitly.
SparseMatrix sparse_triple_product(const SparseMatrix& zt, const SparseMatrix& a,
                                   const SparseMatrix& z);

/// Principal submatrix on a sorted index list.
SparseMatrix principal_submatrix(const SparseMatrix& a,
                                 std::span<const std::size_t> indices);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace hsolve
