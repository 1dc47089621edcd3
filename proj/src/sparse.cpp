#include "hsolve/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hsolve/error.hpp"

namespace hsolve {

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices,
                           std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  validate();
}

void SparseMatrix::validate() const {
  if (row_offsets_.size() != n_rows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() ||
      col_indices_.size() != values_.size()) {
    throw DimensionError("SparseMatrix: inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < n_rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      throw DimensionError("SparseMatrix: row offsets decrease at row " +
                           std::to_string(i));
    }
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] >= n_cols_ ||
          (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])) {
        throw DimensionError("SparseMatrix: bad column index in row " +
                             std::to_string(i));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= n_rows || t.col >= n_cols) {
      throw DimensionError("from_triplets: index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<std::size_t> offsets(n_rows + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t p = 0; p < triplets.size(); ++p) {
    const auto& t = triplets[p];
    if (p > 0 && triplets[p - 1].row == t.row && triplets[p - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return {n_rows, n_cols, std::move(offsets), std::move(cols), std::move(vals)};
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return {n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0)};
}

SparseMatrix SparseMatrix::zero(std::size_t n_rows, std::size_t n_cols) {
  return {n_rows, n_cols, std::vector<std::size_t>(n_rows + 1, 0), {}, {}};
}

std::size_t SparseMatrix::find(std::size_t i, std::size_t j) const {
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return nnz();
  return static_cast<std::size_t>(it - col_indices_.begin());
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const std::size_t p = find(i, j);
  return p == nnz() ? 0.0 : values_[p];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> offsets(n_cols_ + 1, 0);
  for (std::size_t c : col_indices_) ++offsets[c + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::size_t> cols(nnz());
  std::vector<double> vals(nnz());
  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const std::size_t q = next[col_indices_[p]]++;
      cols[q] = i;
      vals[q] = values_[p];
    }
  }
  return {n_cols_, n_rows_, std::move(offsets), std::move(cols), std::move(vals)};
}

std::size_t SparseMatrix::lower_bandwidth() const {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < n_rows_; ++i) {
    if (row_offsets_[i] == row_offsets_[i + 1]) continue;
    const std::size_t c = col_indices_[row_offsets_[i]];
    if (c < i) bw = std::max(bw, i - c);
  }
  return bw;
}

std::size_t SparseMatrix::upper_bandwidth() const {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < n_rows_; ++i) {
    if (row_offsets_[i] == row_offsets_[i + 1]) continue;
    const std::size_t c = col_indices_[row_offsets_[i + 1] - 1];
    if (c > i) bw = std::max(bw, c - i);
  }
  return bw;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows()) {
    throw DimensionError("spmv: dimension mismatch");
  }
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      sum += vals[p] * x[cols[p]];
    }
    y[i] = sum;
  }
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.rows());
  spmv(a, x, y);
  return y;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: dimension mismatch");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();

  // Symbolic pass: pattern of each row of C.
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> marker(m, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t ka : a.row_cols(i)) {
      for (std::size_t j : b.row_cols(ka)) {
        if (marker[j] != i) {
          marker[j] = i;
          ++count;
        }
      }
    }
    offsets[i + 1] = offsets[i] + count;
  }

  // Numeric pass with a dense accumulator per row.
  std::vector<std::size_t> cols(offsets[n]);
  std::vector<double> vals(offsets[n]);
  std::vector<double> acc(m, 0.0);
  std::fill(marker.begin(), marker.end(), n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t q = offsets[i];
    const auto a_cols = a.row_cols(i);
    const auto a_vals = a.row_values(i);
    for (std::size_t pa = 0; pa < a_cols.size(); ++pa) {
      const auto b_cols = b.row_cols(a_cols[pa]);
      const auto b_vals = b.row_values(a_cols[pa]);
      for (std::size_t pb = 0; pb < b_cols.size(); ++pb) {
        const std::size_t j = b_cols[pb];
        if (marker[j] != i) {
          marker[j] = i;
          cols[q++] = j;
          acc[j] = 0.0;
        }
        acc[j] += a_vals[pa] * b_vals[pb];
      }
    }
    std::sort(cols.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              cols.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) vals[p] = acc[cols[p]];
  }
  return {n, m, std::move(offsets), std::move(cols), std::move(vals)};
}

SparseMatrix sparse_triple_product(const SparseMatrix& zt, const SparseMatrix& a,
                                   const SparseMatrix& z) {
  if (zt.cols() != a.rows() || a.cols() != z.rows()) {
    throw DimensionError("sparse_triple_product: dimension mismatch");
  }
  return multiply(zt, multiply(a, z));
}

SparseMatrix principal_submatrix(const SparseMatrix& a,
                                 std::span<const std::size_t> indices) {
  if (a.rows() != a.cols()) throw DimensionError("principal_submatrix: not square");
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(a.rows(), kAbsent);
  for (std::size_t l = 0; l < indices.size(); ++l) {
    if (indices[l] >= a.rows() || (l > 0 && indices[l] <= indices[l - 1])) {
      throw DimensionError("principal_submatrix: indices must be sorted and in range");
    }
    local[indices[l]] = l;
  }
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t gi : indices) {
    const auto row_cols = a.row_cols(gi);
    const auto row_vals = a.row_values(gi);
    for (std::size_t p = 0; p < row_cols.size(); ++p) {
      if (local[row_cols[p]] == kAbsent) continue;
      cols.push_back(local[row_cols[p]]);
      vals.push_back(row_vals[p]);
    }
    offsets.push_back(cols.size());
  }
  return {indices.size(), indices.size(), std::move(offsets), std::move(cols),
          std::move(vals)};
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace hsolve
