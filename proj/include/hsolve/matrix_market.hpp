#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "hsolve/sparse.hpp"

namespace hsolve {

enum class MatrixMarketSymmetry { general, symmetric };

/// Coordinate real format, 1-based indices. `symmetric` writes the lower
/// triangle only and assumes the caller checked symmetry.
void write_matrix_market(std::ostream& out, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::general);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::general);

/// Dense column vector as "matrix array real".
void write_matrix_market_vector(std::ostream& out, std::span<const double> v);
void write_matrix_market_vector(const std::filesystem::path& path,
                                std::span<const double> v);

/// Reads coordinate real general or symmetric files.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

}  // namespace hsolve
