#include "hsolve/ras.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hsolve/error.hpp"

namespace hsolve {

std::string to_string(SubdomainSolver kind) {
  switch (kind) {
    case SubdomainSolver::direct:
      return "direct";
    case SubdomainSolver::deflated_gmres:
      return "deflation";
    case SubdomainSolver::ilu0_gmres:
      return "ilu0";
  }
  return "unknown";
}

SubdomainSolver parse_subdomain_solver(const std::string& name) {
  if (name == "direct" || name == "lu") return SubdomainSolver::direct;
  if (name == "deflation" || name == "deflated") return SubdomainSolver::deflated_gmres;
  if (name == "ilu0" || name == "ilu") return SubdomainSolver::ilu0_gmres;
  throw std::invalid_argument("unknown subdomain strategy '" + name + "'");
}

std::size_t InnerStats::average() const {
  if (solves == 0) return 0;
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(total_iterations) / static_cast<double>(solves)));
}

RASPreconditioner::RASPreconditioner(const SparseMatrix& a, const Partition& partition,
                                     SubdomainStrategy strategy, std::size_t threads)
    : partition_(partition), strategy_(strategy), threads_(std::max<std::size_t>(1, threads)) {
  const auto start = std::chrono::steady_clock::now();
  if (strategy_.kind != SubdomainSolver::direct) {
    SolverConfig probe = strategy_.inner;
    if (probe.max_iterations == 0) probe.max_iterations = 1;
    probe.validate();
  }
  locals_.reserve(partition.size());
  for (std::size_t j = 0; j < partition.size(); ++j) {
    LocalSystem sys = extract_local_matrix(a, partition, j);
    auto factor_direct = [&]() -> Direct {
      try {
        return {BandedLU(sys.matrix)};
      } catch (const SingularMatrixError& e) {
        throw SingularMatrixError("subdomain " + std::to_string(j) + ": " + e.what(),
                                  e.row());
      }
    };
    switch (strategy_.kind) {
      case SubdomainSolver::direct: {
        Direct d = factor_direct();
        locals_.push_back({std::move(sys), std::move(d)});
        break;
      }
      case SubdomainSolver::deflated_gmres: {
        if (sys.nx < 4 || sys.ny < 4) {
          Direct d = factor_direct();
          locals_.push_back({std::move(sys), std::move(d)});
        } else {
          Deflated d{build_context(sys)};
          locals_.push_back({std::move(sys), std::move(d)});
        }
        break;
      }
      case SubdomainSolver::ilu0_gmres: {
        Ilu f;
        try {
          f.ilu = ILU0Factors(sys.matrix);
        } catch (const SingularMatrixError& e) {
          throw SingularMatrixError("subdomain " + std::to_string(j) + ": " + e.what(),
                                    e.row());
        }
        locals_.push_back({std::move(sys), std::move(f)});
        break;
      }
    }
  }
  setup_time_ =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SubdomainSolver RASPreconditioner::solver_used(std::size_t j) const {
  const auto& s = locals_.at(j).solver;
  if (std::holds_alternative<Deflated>(s)) return SubdomainSolver::deflated_gmres;
  if (std::holds_alternative<Ilu>(s)) return SubdomainSolver::ilu0_gmres;
  return SubdomainSolver::direct;
}

RASPreconditioner::SolveOutcome RASPreconditioner::solve_local(
    std::size_t j, std::span<const double> rhs, Vector& out) const {
  const Local& local = locals_[j];
  const SparseMatrix& aj = local.system.matrix;
  SolverConfig cfg = strategy_.inner;
  if (cfg.max_iterations == 0) cfg.max_iterations = 10 * aj.rows();
  SolveOutcome outcome;

  if (const auto* d = std::get_if<Direct>(&local.solver)) {
    out.assign(rhs.begin(), rhs.end());
    d->lu.solve_in_place(out);
    return outcome;
  }
  outcome.iterative = true;
  if (const auto* d = std::get_if<Deflated>(&local.solver)) {
    DeflatedSolveResult res = solve_deflated(d->ctx, aj, rhs, cfg, strategy_.deflated_norm);
    out = std::move(res.u);
    outcome.iterations = res.report.iterations;
    outcome.converged = res.report.converged;
    outcome.true_relative_residual = res.true_relative_residual;
    return outcome;
  }
  const auto& ilu = std::get<Ilu>(local.solver).ilu;
  const LinearOperator m = [&ilu](std::span<const double> x, std::span<double> y) {
    ilu.apply(x, y);
  };
  const Vector zero(rhs.size(), 0.0);
  SolveResult res = gmres(hsolve::as_operator(aj), m, rhs, zero, cfg);
  out = std::move(res.x);
  outcome.iterations = res.report.iterations;
  outcome.converged = res.report.converged;
  outcome.true_relative_residual = res.report.final_true_relative_residual;
  return outcome;
}

void RASPreconditioner::apply_impl(std::span<const double> r, std::span<double> z,
                                   bool descending) {
  const std::size_t n = partition_.n_glob() * partition_.n_glob();
  if (r.size() != n || z.size() != n) throw DimensionError("apply_ras: dimension mismatch");
  const std::size_t count = locals_.size();
  std::vector<Vector> solutions(count);
  std::vector<SolveOutcome> outcomes(count);

  auto work = [&](std::size_t j) {
    const Vector rj = partition_.restrict_to(j, r);
    outcomes[j] = solve_local(j, rj, solutions[j]);
  };
  if (threads_ > 1 && count > 1) {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min(threads_, count);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t j = t; j < count; j += workers) work(j);
      });
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) work(descending ? count - 1 - i : i);
  }

  // Owned entries are disjoint, so overwriting is order independent.
  std::fill(z.begin(), z.end(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = descending ? count - 1 - i : i;
    partition_.prolong_weighted_add(j, solutions[j], z);
    const SolveOutcome& o = outcomes[j];
    ++stats_.solves;
    if (!o.iterative) continue;
    stats_.total_iterations += o.iterations;
    if (!o.converged) ++stats_.unconverged;
    stats_.max_true_relative_residual =
        std::max(stats_.max_true_relative_residual, o.true_relative_residual);
  }
}

void RASPreconditioner::apply(std::span<const double> r, std::span<double> z) {
  apply_impl(r, z, false);
}

void RASPreconditioner::apply_descending(std::span<const double> r, std::span<double> z) {
  apply_impl(r, z, true);
}

Vector RASPreconditioner::apply(std::span<const double> r) {
  Vector z(r.size());
  apply(r, z);
  return z;
}

LinearOperator RASPreconditioner::as_operator() {
  return [this](std::span<const double> r, std::span<double> z) { apply(r, z); };
}

}  // namespace hsolve
