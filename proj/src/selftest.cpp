#include "hsolve/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hsolve/decomposition.hpp"
#include "hsolve/deflation.hpp"
#include "hsolve/grid_fem.hpp"
#include "hsolve/krylov.hpp"
#include "hsolve/ras.hpp"

namespace hsolve {

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

CheckResult check_symmetry() {
  const SparseMatrix a = assemble_matrix(build_grid(40.0, 20));
  std::size_t bad = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (a.at(cols[p], i) != vals[p]) ++bad;
  }
  return {"assembly symmetry", bad == 0, std::to_string(bad) + " asymmetric entries"};
}

CheckResult check_partition_of_unity() {
  std::size_t failures = 0;
  for (std::size_t n_glob : {30u, 60u, 120u}) {
    for (std::size_t n : {1u, 4u, 9u, 16u, 25u}) {
      const Partition p(n_glob, n);
      std::vector<int> count(n_glob * n_glob, 0);
      for (const auto& s : p.subdomains())
        for (std::size_t l = 0; l < s.size(); ++l) count[s.global_indices[l]] += s.owned[l];
      if (!std::all_of(count.begin(), count.end(), [](int c) { return c == 1; })) ++failures;
    }
  }
  return {"partition of unity", failures == 0, std::to_string(failures) + " failing layouts"};
}

CheckResult check_projector() {
  const GridSpec grid = build_grid(40.0, 60);
  const SparseMatrix a = assemble_matrix(grid);
  const Partition p(60, 9);
  const LocalSystem local = extract_local_matrix(a, p, 4);
  const DeflationContext ctx = build_context(local);
  std::mt19937_64 rng(7);
  double idem = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Vector v = random_vector(local.matrix.rows(), rng);
    Vector pv(v.size()), ppv(v.size());
    ctx.apply_projector(v, pv);
    ctx.apply_projector(pv, ppv);
    axpy(-1.0, pv, ppv);
    idem = std::max(idem, norm2(ppv) / norm2(v));
  }
  return {"deflation projector idempotence", idem <= 1e-11, "max " + sci(idem)};
}

CheckResult check_fgmres_termination() {
  const SparseMatrix a = assemble_matrix(build_grid(20.0, 7));
  std::mt19937_64 rng(3);
  const Vector b = random_vector(a.rows(), rng);
  const Vector x0(a.rows(), 0.0);
  const SolveResult r = fgmres(as_operator(a), {}, b, x0, {1e-10, 49, 0});
  return {"fgmres finite termination", r.report.converged && r.report.iterations <= 49,
          std::to_string(r.report.iterations) + " iterations, residual " +
              sci(r.report.final_true_relative_residual)};
}

CheckResult check_ras_order() {
  const SparseMatrix a = assemble_matrix(build_grid(20.0, 30));
  const Partition p(30, 9);
  SubdomainStrategy s;
  s.kind = SubdomainSolver::deflated_gmres;
  s.inner.rel_tol = 1e-5;
  RASPreconditioner ras(a, p, s);
  std::mt19937_64 rng(11);
  const Vector r = random_vector(a.rows(), rng);
  Vector up(r.size()), down(r.size());
  ras.apply(r, up);
  ras.apply_descending(r, down);
  return {"ras subdomain order independence", up == down, up == down ? "identical" : "differ"};
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;
  for (auto check : {check_symmetry, check_partition_of_unity, check_projector,
                     check_fgmres_termination, check_ras_order}) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"exception", false, e.what()});
    }
  }
  return out;
}

}  // namespace hsolve
