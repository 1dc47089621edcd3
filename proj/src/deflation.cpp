#include "hsolve/deflation.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "hsolve/error.hpp"

namespace hsolve {

SparseMatrix build_deflation_1d(std::size_t n) {
  if (n < 4) {
    throw SubdomainTooSmall("build_deflation_1d: need at least 4 nodes, got " +
                            std::to_string(n));
  }
  constexpr std::array<double, 5> kStencil{1.0 / 8, 4.0 / 8, 6.0 / 8, 4.0 / 8, 1.0 / 8};
  const std::size_t nc = n / 2;
  std::vector<Triplet> t;
  t.reserve(5 * nc);
  for (std::size_t c = 0; c < nc; ++c) {
    // Coarse point c sits on fine node 2c+1; the stencil starts two below it.
    for (std::size_t s = 0; s < kStencil.size(); ++s) {
      const std::size_t row = 2 * c + s;  // fine row + 1
      if (row == 0 || row - 1 >= n) continue;
      t.push_back({row - 1, c, kStencil[s]});
    }
  }
  return SparseMatrix::from_triplets(n, nc, std::move(t));
}

SparseMatrix build_deflation_2d(std::size_t nx, std::size_t ny) {
  const SparseMatrix zx = build_deflation_1d(nx);
  const SparseMatrix zy = build_deflation_1d(ny);
  const std::size_t ncx = zx.cols();
  std::vector<Triplet> t;
  t.reserve(zx.nnz() * zy.nnz());
  for (std::size_t ry = 0; ry < ny; ++ry) {
    for (std::size_t py = zy.row_offsets()[ry]; py < zy.row_offsets()[ry + 1]; ++py) {
      const std::size_t cy = zy.col_indices()[py];
      const double wy = zy.values()[py];
      for (std::size_t rx = 0; rx < nx; ++rx) {
        const auto cols = zx.row_cols(rx);
        const auto vals = zx.row_values(rx);
        for (std::size_t p = 0; p < cols.size(); ++p) {
          t.push_back({ry * nx + rx, cy * ncx + cols[p], wy * vals[p]});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(nx * ny, ncx * zy.cols(), std::move(t));
}

DeflationContext DeflationContext::from_basis(const SparseMatrix& a_j, SparseMatrix z,
                                              std::size_t id) {
  if (z.rows() != a_j.rows()) {
    throw DimensionError("DeflationContext: basis and matrix sizes differ");
  }
  DeflationContext ctx;
  ctx.id_ = id;
  ctx.z_ = std::move(z);
  ctx.zt_ = ctx.z_.transpose();
  ctx.az_ = multiply(a_j, ctx.z_);
  ctx.e_ = multiply(ctx.zt_, ctx.az_);
  try {
    ctx.e_factor_ = BandedLU(ctx.e_);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError("subdomain " + std::to_string(id) +
                                  ": singular coarse operator (resonant subproblem?): " +
                                  e.what(),
                              e.row());
  }
  return ctx;
}

void DeflationContext::apply_coarse_correction(std::span<const double> y,
                                               std::span<double> out) const {
  Vector coarse = spmv(zt_, y);
  e_factor_.solve_in_place(coarse);
  spmv(z_, coarse, out);
}

void DeflationContext::apply_projector(std::span<const double> y,
                                       std::span<double> out) const {
  Vector coarse = spmv(zt_, y);
  e_factor_.solve_in_place(coarse);
  spmv(az_, coarse, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] - out[i];
}

void DeflationContext::apply_deflated_operator(const SparseMatrix& a_j,
                                               std::span<const double> v,
                                               std::span<double> out) const {
  const Vector av = spmv(a_j, v);
  apply_projector(av, out);
}

DeflationContext build_context(const LocalSystem& local) {
  if (local.nx < 4 || local.ny < 4) {
    throw SubdomainTooSmall("subdomain " + std::to_string(local.id) + " is " +
                            std::to_string(local.nx) + "x" + std::to_string(local.ny) +
                            ", deflation needs at least 4x4");
  }
  auto ctx = DeflationContext::from_basis(local.matrix,
                                          build_deflation_2d(local.nx, local.ny), local.id);
  ctx.n_cx = local.nx / 2;
  ctx.n_cy = local.ny / 2;
  return ctx;
}

Vector apply_deflated_operator(const DeflationContext& ctx, const SparseMatrix& a_j,
                               std::span<const double> v) {
  Vector out(v.size());
  ctx.apply_deflated_operator(a_j, v, out);
  return out;
}

DeflatedSolveResult solve_deflated(const DeflationContext& ctx, const SparseMatrix& a_j,
                                   std::span<const double> f, const SolverConfig& cfg,
                                   DeflatedNorm norm) {
  const std::size_t n = f.size();
  if (n != a_j.rows() || n != ctx.fine_size()) {
    throw DimensionError("solve_deflated: dimension mismatch");
  }
  DeflatedSolveResult res;
  const double f_norm = norm2(f);
  if (f_norm == 0.0) {
    res.u.assign(n, 0.0);
    res.report.converged = true;
    res.report.relative_residuals.push_back(0.0);
    return res;
  }

  Vector pf(n);
  ctx.apply_projector(f, pf);
  SolverConfig inner = cfg;
  if (norm == DeflatedNorm::original) {
    // f - A u = P f - P A x, so rescaling the tolerance switches the reference norm.
    const double pf_norm = norm2(pf);
    if (pf_norm > 0.0) inner.rel_tol = std::min(0.5, cfg.rel_tol * f_norm / pf_norm);
  }
  const LinearOperator op = [&](std::span<const double> v, std::span<double> out) {
    ctx.apply_deflated_operator(a_j, v, out);
  };
  const Vector zero(n, 0.0);
  SolveResult sr = gmres(op, LinearOperator{}, pf, zero, inner);
  res.report = std::move(sr.report);

  // u = x + Q (f - A x)
  Vector r = spmv(a_j, sr.x);
  for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - r[i];
  Vector correction(n);
  ctx.apply_coarse_correction(r, correction);
  res.u = std::move(sr.x);
  axpy(1.0, correction, res.u);

  Vector check = spmv(a_j, res.u);
  for (std::size_t i = 0; i < n; ++i) check[i] = f[i] - check[i];
  res.true_relative_residual = norm2(check) / f_norm;
  return res;
}

}  // namespace hsolve
