#include <doctest.h>

#include <random>

#include "hsolve/decomposition.hpp"
#include "hsolve/deflation.hpp"
#include "hsolve/grid_fem.hpp"
#include "oracles.hpp"

using namespace hsolve;

namespace {

LocalSystem block(double k, std::size_t n_glob, std::size_t nsub, std::size_t j) {
  const SparseMatrix a = assemble_matrix(build_grid(k, n_glob));
  return extract_local_matrix(a, Partition(n_glob, nsub), j);
}

// Whole grid of n x n interior nodes as a single local system.
LocalSystem whole(double k, std::size_t n) {
  GridSpec g{k, n, 1.0 / static_cast<double>(n + 1), 0.0};
  return {0, assemble_matrix(g), n, n};
}

DenseMatrix dense_p(const DeflationContext& ctx, const SparseMatrix& a) {
  const DenseMatrix ad = DenseMatrix::from_sparse(a);
  const DenseMatrix z = DenseMatrix::from_sparse(ctx.z());
  const DenseMatrix zt = oracle::dense_transpose(z);
  const DenseMatrix e = oracle::dense_multiply(zt, oracle::dense_multiply(ad, z));
  // E^{-1} Z^T column by column
  const std::size_t n = a.rows(), m = z.cols();
  DenseMatrix einv_zt(m, n);
  for (std::size_t c = 0; c < n; ++c) {
    Vector col(m);
    for (std::size_t r = 0; r < m; ++r) col[r] = zt(r, c);
    const Vector s = dense_lu_solve(e, col);
    for (std::size_t r = 0; r < m; ++r) einv_zt(r, c) = s[r];
  }
  const DenseMatrix aq = oracle::dense_multiply(ad, oracle::dense_multiply(z, einv_zt));
  DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = (i == j ? 1.0 : 0.0) - aq(i, j);
  return p;
}

}  // namespace

TEST_CASE("1D deflation basis") {
  const SparseMatrix z = build_deflation_1d(8);
  REQUIRE(z.rows() == 8);
  REQUIRE(z.cols() == 4);
  CHECK(oracle::max_abs_diff(DenseMatrix::from_sparse(z), oracle::deflation_1d(8)) == 0.0);
  const DenseMatrix zd = DenseMatrix::from_sparse(z);
  const Vector col0{4, 6, 4, 1, 0, 0, 0, 0}, col3{0, 0, 0, 0, 0, 1, 4, 6};
  for (std::size_t r = 0; r < 8; ++r) {
    CHECK(zd(r, 0) == col0[r] / 8.0);
    CHECK(zd(r, 3) == col3[r] / 8.0);
  }
  for (std::size_t n = 4; n <= 41; ++n)
    CHECK(oracle::max_abs_diff(DenseMatrix::from_sparse(build_deflation_1d(n)),
                               oracle::deflation_1d(n)) == 0.0);

  const SparseMatrix z20 = build_deflation_1d(20);
  const Vector s = spmv(z20.transpose(), Vector(20, 1.0));
  for (std::size_t i1 = 1; i1 <= 10; ++i1) {
    if (2 * i1 >= 3 && 2 * i1 + 2 <= 20) CHECK(s[i1 - 1] == 2.0);
  }
  CHECK(spmv(z20, Vector(10, 0.0)) == Vector(20, 0.0));

  CHECK_THROWS_AS(build_deflation_1d(3), SubdomainTooSmall);
  CHECK_THROWS_AS(build_deflation_2d(4, 3), SubdomainTooSmall);
}

TEST_CASE("2D deflation basis is the Kronecker product") {
  for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{6, 8}, {4, 4}, {7, 5}}) {
    const SparseMatrix z = build_deflation_2d(nx, ny);
    const DenseMatrix zx = oracle::deflation_1d(nx), zy = oracle::deflation_1d(ny);
    const DenseMatrix ref = oracle::kronecker(zy, zx);
    REQUIRE(z.rows() == nx * ny);
    REQUIRE(z.cols() == (nx / 2) * (ny / 2));
    CHECK(oracle::max_abs_diff(DenseMatrix::from_sparse(z), ref) == 0.0);
    const DenseMatrix zd = DenseMatrix::from_sparse(z);
    for (std::size_t ry = 0; ry < ny; ++ry)
      for (std::size_t rx = 0; rx < nx; ++rx)
        for (std::size_t cy = 0; cy < ny / 2; ++cy)
          for (std::size_t cx = 0; cx < nx / 2; ++cx)
            REQUIRE(zd(ry * nx + rx, cy * (nx / 2) + cx) == zy(ry, cy) * zx(rx, cx));
  }
}

TEST_CASE("coarse operator") {
  SUBCASE("4x4 Laplacian block against dense") {
    const LocalSystem loc = whole(0.0, 4);
    const DeflationContext ctx = build_context(loc);
    CHECK(ctx.n_cx == 2);
    CHECK(ctx.n_cy == 2);
    const DenseMatrix z = DenseMatrix::from_sparse(ctx.z());
    const DenseMatrix ref = oracle::dense_multiply(
        oracle::dense_transpose(z),
        oracle::dense_multiply(DenseMatrix::from_sparse(loc.matrix), z));
    CHECK(oracle::max_abs_diff(DenseMatrix::from_sparse(ctx.coarse_operator()), ref) <=
          1e-13 * oracle::max_abs(ref));
  }
  SUBCASE("12x12 block: symmetric, stencil within 2") {
    const LocalSystem loc = whole(25.0, 12);
    const DeflationContext ctx = build_context(loc);
    const SparseMatrix& e = ctx.coarse_operator();
    const DenseMatrix ed = DenseMatrix::from_sparse(e);
    for (std::size_t i = 0; i < e.rows(); ++i) {
      for (std::size_t j : e.row_cols(i)) {
        const long dx = static_cast<long>(i % 6) - static_cast<long>(j % 6);
        const long dy = static_cast<long>(i / 6) - static_cast<long>(j / 6);
        CHECK(std::abs(dx) <= 2);
        CHECK(std::abs(dy) <= 2);
        CHECK(std::abs(ed(i, j) - ed(j, i)) <= 1e-14 * oracle::max_abs(ed));
      }
    }
  }
  SUBCASE("too small") {
    const LocalSystem loc = whole(10.0, 3);
    CHECK_THROWS_AS(build_context(loc), SubdomainTooSmall);
  }
}

TEST_CASE("deflated operator") {
  std::mt19937_64 rng(42);
  SUBCASE("annihilates the coarse space") {
    const LocalSystem loc = block(20.0, 30, 4, 0);
    const DeflationContext ctx = build_context(loc);
    for (int t = 0; t < 5; ++t) {
      const Vector w = oracle::random_vector(ctx.coarse_size(), rng);
      const Vector zw = spmv(ctx.z(), w);
      const Vector out = apply_deflated_operator(ctx, loc.matrix, zw);
      CHECK(norm2(out) <= 1e-10 * norm2(spmv(loc.matrix, zw)));
    }
  }
  SUBCASE("empty basis gives A v") {
    const LocalSystem loc = whole(10.0, 5);
    const DeflationContext ctx =
        DeflationContext::from_basis(loc.matrix, SparseMatrix::zero(25, 0));
    const Vector v = oracle::random_vector(25, rng);
    CHECK(apply_deflated_operator(ctx, loc.matrix, v) == spmv(loc.matrix, v));
  }
  SUBCASE("6x6 block against dense P A v") {
    const LocalSystem loc = whole(15.0, 6);
    const DeflationContext ctx = build_context(loc);
    const DenseMatrix p = dense_p(ctx, loc.matrix);
    const DenseMatrix pa = oracle::dense_multiply(p, DenseMatrix::from_sparse(loc.matrix));
    for (int t = 0; t < 5; ++t) {
      const Vector v = oracle::random_vector(36, rng);
      CHECK(oracle::rel_diff(apply_deflated_operator(ctx, loc.matrix, v),
                             oracle::dense_matvec(pa, v)) <= 1e-12);
    }
  }
  SUBCASE("projector identities on random vectors") {
    const LocalSystem loc = block(40.0, 60, 9, 4);
    const DeflationContext ctx = build_context(loc);
    const std::size_t n = loc.matrix.rows();
    Vector pv(n), ppv(n), qv(n);
    for (int t = 0; t < 50; ++t) {
      const Vector v = oracle::random_vector(n, rng);
      ctx.apply_projector(v, pv);
      ctx.apply_projector(pv, ppv);
      Vector d = ppv;
      axpy(-1.0, pv, d);
      REQUIRE(norm2(d) <= 1e-11 * norm2(v));

      // P A v == A (I - Q A) v
      const Vector pav = apply_deflated_operator(ctx, loc.matrix, v);
      const Vector av = spmv(loc.matrix, v);
      ctx.apply_coarse_correction(av, qv);
      Vector w = v;
      axpy(-1.0, qv, w);
      REQUIRE(oracle::rel_diff(spmv(loc.matrix, w), pav) <= 1e-12);
    }
  }
}

TEST_CASE("deflated solve") {
  const SolverConfig cfg{1e-10, 2560, 0};
  SUBCASE("zero right-hand side") {
    const LocalSystem loc = block(20.0, 30, 4, 0);
    const DeflationContext ctx = build_context(loc);
    const DeflatedSolveResult r = solve_deflated(ctx, loc.matrix, Vector(256, 0.0), cfg);
    CHECK(r.u == Vector(256, 0.0));
    CHECK(r.report.iterations == 0);
  }
  SUBCASE("16x16 block from k=20, n=30, N=4") {
    const LocalSystem loc = block(20.0, 30, 4, 0);
    REQUIRE(loc.nx == 16);
    REQUIRE(loc.ny == 16);
    const DeflationContext ctx = build_context(loc);
    std::mt19937_64 rng(8);
    for (DeflatedNorm norm : {DeflatedNorm::deflated, DeflatedNorm::original}) {
      const Vector f = oracle::random_vector(256, rng);
      const DeflatedSolveResult r = solve_deflated(ctx, loc.matrix, f, cfg, norm);
      CHECK(r.report.converged);
      CHECK(r.report.iterations >= 10);
      CHECK(r.report.iterations <= 40);
      CHECK(r.true_relative_residual <= 10 * cfg.rel_tol);
      const Vector ref = BandedLU(loc.matrix).solve(f);
      CHECK(oracle::rel_diff(r.u, ref) <= 1e-8);
      Vector res = spmv(loc.matrix, r.u);
      axpy(-1.0, f, res);
      CHECK(norm2(res) / norm2(f) == doctest::Approx(r.true_relative_residual).epsilon(1e-6));
    }
  }
  SUBCASE("reconstruction bound across loose tolerances") {
    std::mt19937_64 rng(99);
    for (const LocalSystem& loc : {block(40.0, 60, 9, 4), block(20.0, 60, 4, 3), whole(10.0, 9)}) {
      const DeflationContext ctx = build_context(loc);
      for (double tol : {1e-2, 1e-5, 1e-10}) {
        const Vector f = oracle::random_vector(loc.matrix.rows(), rng);
        const DeflatedSolveResult r =
            solve_deflated(ctx, loc.matrix, f, {tol, 10 * loc.matrix.rows(), 0});
        CAPTURE(tol);
        CHECK(r.report.converged);
        CHECK(r.true_relative_residual <= 10 * tol);
      }
    }
  }
}
