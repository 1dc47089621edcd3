#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsolve/krylov.hpp"
#include "hsolve/ras.hpp"

namespace hsolve {

/// Grid size used by the benchmark presets: 1.5 k at 10 ppwl, 3 k at 20 ppwl.
std::size_t preset_n_glob(double k, int ppwl);

struct ExperimentConfig {
  std::vector<double> k_values;
  /// 10 or 20; ignored when n_glob is set.
  int ppwl = 10;
  std::optional<std::size_t> n_glob;
  std::vector<std::size_t> subdomain_counts;
  SubdomainStrategy strategy;
  SolverConfig outer{1e-6, 100000, 0};
  /// Multiplies the point source; iteration counts must not depend on it.
  double rhs_scale = 1.0;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

struct CellRecord {
  double k = 0.0;
  std::size_t n_glob = 0;
  std::size_t n_subdomains = 0;
  double ppwl = 0.0;
  SubdomainSolver strategy = SubdomainSolver::direct;
  double inner_tol = 0.0;
  std::size_t outer_iterations = 0;
  std::size_t avg_inner_iterations = 0;
  std::size_t total_inner_iterations = 0;
  std::size_t subdomain_solves = 0;
  std::size_t unconverged_inner = 0;
  double max_inner_true_residual = 0.0;
  bool converged = false;
  double setup_time = 0.0;
  double solve_time = 0.0;
  double final_residual = 0.0;
  /// Non-empty when the cell failed during setup or solve.
  std::string error;
};

struct ExperimentReport {
  std::vector<CellRecord> cells;

  /// Sorted by (ppwl, strategy, inner_tol, k, N).
  void sort();
  const CellRecord* find(double k, std::size_t n_subdomains, double ppwl,
                         SubdomainSolver strategy) const;
  bool all_converged() const;
};

/// Runs a single (k, n_glob, N) cell: assemble, partition, build RAS, FGMRES
/// from a zero initial guess. Failures are recorded, not thrown.
CellRecord run_cell(double k, std::size_t n_glob, double ppwl, std::size_t n_subdomains,
                    const SubdomainStrategy& strategy, const SolverConfig& outer,
                    double rhs_scale = 1.0, std::size_t threads = 1);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Preset sweeps for the five benchmark tables, k capped at max_k.
/// Throws std::invalid_argument for an unknown table.
std::vector<ExperimentConfig> table_presets(int table, double max_k);

enum class TableFormat { text, csv, json };
TableFormat parse_table_format(const std::string& name);

inline constexpr const char* kCsvHeader =
    "k,n_glob,N,ppwl,strategy,inner_tol,outer_iters,avg_inner,total_inner,solves,"
    "converged,setup_s,solve_s,final_rel_res";

/// Throws Error on an empty report. With include_timings == false the timing
/// columns are written as 0 so the output is byte-for-byte reproducible.
std::string emit_table(const ExperimentReport& report, TableFormat format,
                       bool include_timings = true);

/// Thread count from HSOLVE_THREADS, defaulting to 1.
std::size_t threads_from_env();

}  // namespace hsolve
