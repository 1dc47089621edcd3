#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hsolve/decomposition.hpp"
#include "hsolve/deflation.hpp"
#include "hsolve/krylov.hpp"
#include "hsolve/linalg.hpp"

namespace hsolve {

enum class SubdomainSolver { direct, deflated_gmres, ilu0_gmres };

std::string to_string(SubdomainSolver kind);
/// Accepts "direct", "deflation"/"deflated", "ilu0". Throws std::invalid_argument.
SubdomainSolver parse_subdomain_solver(const std::string& name);

struct SubdomainStrategy {
  SubdomainSolver kind = SubdomainSolver::direct;
  /// Inner tolerance and restart for the iterative kinds. max_iterations == 0
  /// means 10 x (local dimension).
  SolverConfig inner{1e-10, 0, 0};
  DeflatedNorm deflated_norm = DeflatedNorm::original;
};

/// Totals over every subdomain solve since construction (or the last reset).
struct InnerStats {
  std::size_t total_iterations = 0;
  std::size_t solves = 0;
  std::size_t unconverged = 0;
  /// Largest ||f_j - A_j u_j|| / ||f_j|| seen in an iterative solve.
  double max_true_relative_residual = 0.0;

  /// Nearest integer of total_iterations / solves (0 when no solves).
  std::size_t average() const;
};

/// One-level restricted additive Schwarz: z = sum_j R_j^T D_j A_j^{-1} R_j r,
/// with A_j^{-1} realised by the chosen subdomain solver.
class RASPreconditioner {
 public:
  /// Factorises every subdomain eagerly. Deflated subdomains narrower than 4
  /// nodes on an axis fall back to the direct solver.
  RASPreconditioner(const SparseMatrix& a, const Partition& partition,
                    SubdomainStrategy strategy, std::size_t threads = 1);

  void apply(std::span<const double> r, std::span<double> z);
  Vector apply(std::span<const double> r);
  /// Same as apply but visits subdomains in descending order.
  void apply_descending(std::span<const double> r, std::span<double> z);

  /// Preconditioner callback for fgmres; keeps a reference to *this.
  LinearOperator as_operator();

  const InnerStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  double setup_time() const { return setup_time_; }
  const Partition& partition() const { return partition_; }
  const SubdomainStrategy& strategy() const { return strategy_; }
  /// Solver actually used on subdomain j (after any fallback).
  SubdomainSolver solver_used(std::size_t j) const;
  const LocalSystem& local_system(std::size_t j) const { return locals_.at(j).system; }

 private:
  struct Direct {
    BandedLU lu;
  };
  struct Deflated {
    DeflationContext ctx;
  };
  struct Ilu {
    ILU0Factors ilu;
  };
  struct Local {
    LocalSystem system;
    std::variant<Direct, Deflated, Ilu> solver;
  };
  struct SolveOutcome {
    std::size_t iterations = 0;
    bool iterative = false;
    bool converged = true;
    double true_relative_residual = 0.0;
  };

  SolveOutcome solve_local(std::size_t j, std::span<const double> rhs, Vector& out) const;
  void apply_impl(std::span<const double> r, std::span<double> z, bool descending);

  const Partition& partition_;
  SubdomainStrategy strategy_;
  std::size_t threads_;
  std::vector<Local> locals_;
  InnerStats stats_;
  double setup_time_ = 0.0;
};

inline RASPreconditioner build_ras(const SparseMatrix& a, const Partition& p,
                                   SubdomainStrategy s, std::size_t threads = 1) {
  return RASPreconditioner(a, p, s, threads);
}

}  // namespace hsolve
