#include "hsolve/grid_fem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hsolve/error.hpp"

namespace hsolve {

GridSpec build_grid(double k, std::size_t n_glob) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("build_grid: wave number must be positive");
  }
  if (n_glob < 3) {
    throw SizingError("build_grid: n_glob must be at least 3, got " +
                      std::to_string(n_glob));
  }
  GridSpec g;
  g.k = k;
  g.n_glob = n_glob;
  g.h = 1.0 / static_cast<double>(n_glob + 1);
  g.n_ppwl = 2.0 * std::numbers::pi / (k * g.h);
  return g;
}

SparseMatrix assemble_matrix(const GridSpec& grid) {
  const std::size_t n = grid.n_glob;
  const double kh2 = grid.k * grid.k * grid.h * grid.h;
  const double center = 4.0 - kh2 / 2.0;
  const double axis = -1.0 - kh2 / 12.0;
  const double diagonal = -kh2 / 12.0;

  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(7 * n * n);
  vals.reserve(7 * n * n);
  auto push = [&](std::size_t c, double v) {
    cols.push_back(c);
    vals.push_back(v);
  };
  // Neighbours in increasing flat order: SW, S, W, C, E, N, NE.
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t c = iy * n + ix;
      if (iy > 0 && ix > 0) push(c - n - 1, diagonal);
      if (iy > 0) push(c - n, axis);
      if (ix > 0) push(c - 1, axis);
      push(c, center);
      if (ix + 1 < n) push(c + 1, axis);
      if (iy + 1 < n) push(c + n, axis);
      if (iy + 1 < n && ix + 1 < n) push(c + n + 1, diagonal);
      offsets.push_back(cols.size());
    }
  }
  return {n * n, n * n, std::move(offsets), std::move(cols), std::move(vals)};
}

std::size_t source_axis_index(std::size_t n_glob) {
  // ceil(n/2) in 1-based numbering.
  return (n_glob + 1) / 2 - 1;
}

Vector assemble_rhs(const GridSpec& grid) {
  Vector f(grid.dofs(), 0.0);
  if (grid.n_glob == 0) return f;
  const std::size_t s = source_axis_index(grid.n_glob);
  f[s * grid.n_glob + s] = 1.0;
  return f;
}

}  // namespace hsolve
