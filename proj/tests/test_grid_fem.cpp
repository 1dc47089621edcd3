#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hsolve/error.hpp"
#include "hsolve/grid_fem.hpp"
#include "hsolve/matrix_market.hpp"
#include "oracles.hpp"

using namespace hsolve;

TEST_CASE("build_grid spacing and resolution") {
  const GridSpec a = build_grid(20.0, 30);
  CHECK(a.h == doctest::Approx(1.0 / 31));
  CHECK(a.n_ppwl == doctest::Approx(9.74).epsilon(1e-3));
  CHECK(a.h * 31.0 == doctest::Approx(1.0).epsilon(1e-15));

  const GridSpec b = build_grid(20.0, 60);
  CHECK(b.h == doctest::Approx(1.0 / 61));
  CHECK(std::abs(b.n_ppwl - 19.17) < 0.01);

  const GridSpec c = build_grid(1.0, 3);
  CHECK(c.h == 0.25);
  CHECK(c.n_ppwl == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("build_grid rejects bad input") {
  CHECK_THROWS_AS(build_grid(20.0, 2), SizingError);
  CHECK_THROWS_AS(build_grid(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-1.0, 10), std::invalid_argument);
}

TEST_CASE("single interior node") {
  GridSpec g{7.0, 1, 0.5, 0.0};
  const SparseMatrix a = assemble_matrix(g);
  REQUIRE(a.rows() == 1);
  CHECK(a.at(0, 0) == doctest::Approx(4.0 - 49.0 * 0.25 / 2.0));
}

TEST_CASE("zero wave number gives the 5-point Laplacian") {
  GridSpec g{0.0, 5, 1.0 / 6, 0.0};
  const SparseMatrix a = assemble_matrix(g);
  for (std::size_t iy = 0; iy < 5; ++iy) {
    for (std::size_t ix = 0; ix < 5; ++ix) {
      const std::size_t c = iy * 5 + ix;
      double boundary_neighbours = 0;
      boundary_neighbours += ix == 0;
      boundary_neighbours += ix == 4;
      boundary_neighbours += iy == 0;
      boundary_neighbours += iy == 4;
      CHECK(a.at(c, c) == 4.0);
      if (ix > 0) CHECK(a.at(c, c - 1) == -1.0);
      if (iy > 0) CHECK(a.at(c, c - 5) == -1.0);
      if (ix > 0 && iy > 0) CHECK(a.at(c, c - 6) == 0.0);
      double row_sum = 0.0;
      for (double v : a.row_values(c)) row_sum += v;
      CHECK(row_sum == boundary_neighbours);
    }
  }
}

TEST_CASE("CSR assembly matches the dense element loop") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (double k : {0.0, 3.0, 10.0, 25.0}) {
      GridSpec g{k, n, 1.0 / static_cast<double>(n + 1), 0.0};
      const DenseMatrix dense = DenseMatrix::from_sparse(assemble_matrix(g));
      const DenseMatrix ref = oracle::element_loop_assembly(n, k);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(oracle::max_abs_diff(dense, ref) <= 1e-15 * std::max(1.0, oracle::max_abs(ref)));
    }
  }
}

TEST_CASE("interior stencil values") {
  const GridSpec g = build_grid(10.0, 3);
  const SparseMatrix a = assemble_matrix(g);
  const double kh2 = 100.0 / 16.0;
  CHECK(a.at(4, 4) == doctest::Approx(4.0 - kh2 / 2));
  CHECK(a.at(4, 3) == doctest::Approx(-1.0 - kh2 / 12));
  CHECK(a.at(4, 8) == doctest::Approx(-kh2 / 12));  // upper right
  CHECK(a.at(4, 0) == doctest::Approx(-kh2 / 12));  // lower left
  CHECK(a.find(4, 6) == a.nnz());                   // upper left absent
  CHECK(a.find(4, 2) == a.nnz());
}

TEST_CASE("assembled matrix is exactly symmetric") {
  const SparseMatrix a = assemble_matrix(build_grid(37.0, 23));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) REQUIRE(a.at(cols[p], i) == vals[p]);
  }
}

TEST_CASE("mass part sums to h^2 on full interior rows") {
  const std::size_t n = 9;
  const double kappa = 13.0;
  GridSpec g0{0.0, n, 0.1, 0.0};
  GridSpec gk{kappa, n, 0.1, 0.0};
  const SparseMatrix a0 = assemble_matrix(g0);
  const SparseMatrix ak = assemble_matrix(gk);
  for (std::size_t iy = 1; iy + 1 < n; ++iy) {
    for (std::size_t ix = 1; ix + 1 < n; ++ix) {
      const std::size_t r = iy * n + ix;
      double mass = 0.0;
      for (std::size_t j : ak.row_cols(r)) mass += (ak.at(r, j) - a0.at(r, j)) / (-kappa * kappa);
      CHECK(mass == doctest::Approx(0.01).epsilon(1e-12));
    }
  }
}

TEST_CASE("point source location") {
  const Vector f3 = assemble_rhs(build_grid(5.0, 3));
  for (std::size_t i = 0; i < 9; ++i) CHECK(f3[i] == (i == 4 ? 1.0 : 0.0));

  const Vector f30 = assemble_rhs(build_grid(20.0, 30));
  CHECK(f30[435 - 1] == 1.0);
  CHECK(oracle::nearest_centre_node(30) == 435 - 1);

  const Vector f4 = assemble_rhs(build_grid(5.0, 4));
  CHECK(f4[6 - 1] == 1.0);
  CHECK(oracle::nearest_centre_node(4) == 6 - 1);

  for (std::size_t n = 3; n <= 40; ++n) {
    const Vector f = assemble_rhs(build_grid(1.0, n));
    const std::size_t expected = oracle::nearest_centre_node(n);
    double sum = 0.0;
    for (double v : f) sum += v;
    CAPTURE(n);
    CHECK(sum == 1.0);
    CHECK(f[expected] == 1.0);
  }
}

TEST_CASE("MatrixMarket export and reload") {
  const GridSpec g = build_grid(20.0, 6);
  const SparseMatrix a = assemble_matrix(g);
  for (auto sym : {MatrixMarketSymmetry::general, MatrixMarketSymmetry::symmetric}) {
    std::stringstream s;
    write_matrix_market(s, a, sym);
    const std::string header = s.str().substr(0, s.str().find('\n'));
    CHECK(header == (sym == MatrixMarketSymmetry::general
                         ? "%%MatrixMarket matrix coordinate real general"
                         : "%%MatrixMarket matrix coordinate real symmetric"));
    const SparseMatrix b = read_matrix_market(s);
    REQUIRE(b.rows() == a.rows());
    REQUIRE(b.nnz() == a.nnz());
    for (std::size_t p = 0; p < a.nnz(); ++p) {
      CHECK(b.col_indices()[p] == a.col_indices()[p]);
      CHECK(b.values()[p] == a.values()[p]);
    }
  }
  std::stringstream bad("%%MatrixMarket matrix array real general\n2 1\n1\n2\n");
  CHECK_THROWS_AS(read_matrix_market(bad), Error);
}
