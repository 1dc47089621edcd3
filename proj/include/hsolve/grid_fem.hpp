#pragma once

#include <cstddef>

#include "hsolve/sparse.hpp"

namespace hsolve {

/// Uniform discretisation of the unit square with n_glob interior nodes per
/// axis. Interior nodes are numbered lexicographically with x fastest:
/// flat index = iy * n_glob + ix (0-based).
struct GridSpec {
  double k = 0.0;
  std::size_t n_glob = 0;
  double h = 0.0;
  double n_ppwl = 0.0;

  std::size_t dofs() const { return n_glob * n_glob; }
};

/// Throws SizingError for n_glob < 3 and std::invalid_argument for k <= 0.
GridSpec build_grid(double k, std::size_t n_glob);

/// P1 system matrix K - k^2 M with Dirichlet nodes eliminated. Each grid cell
/// is split along its lower-left to upper-right diagonal.
SparseMatrix assemble_matrix(const GridSpec& grid);

/// Unit nodal load at the interior node nearest to (0.5, 0.5), ties toward the
/// lower index on each axis.
Vector assemble_rhs(const GridSpec& grid);

/// 0-based per-axis index of the source node.
std::size_t source_axis_index(std::size_t n_glob);

}  // namespace hsolve
