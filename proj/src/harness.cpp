#include "hsolve/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "hsolve/decomposition.hpp"
#include "hsolve/error.hpp"
#include "hsolve/grid_fem.hpp"

namespace hsolve {

std::size_t preset_n_glob(double k, int ppwl) {
  if (ppwl == 10) return static_cast<std::size_t>(std::llround(1.5 * k));
  if (ppwl == 20) return static_cast<std::size_t>(std::llround(3.0 * k));
  throw std::invalid_argument("ppwl preset must be 10 or 20");
}

void ExperimentReport::sort() {
  std::stable_sort(cells.begin(), cells.end(), [](const CellRecord& a, const CellRecord& b) {
    return std::tie(a.ppwl, a.strategy, a.inner_tol, a.k, a.n_subdomains) <
           std::tie(b.ppwl, b.strategy, b.inner_tol, b.k, b.n_subdomains);
  });
}

const CellRecord* ExperimentReport::find(double k, std::size_t n_subdomains, double ppwl,
                                         SubdomainSolver strategy) const {
  for (const auto& c : cells) {
    if (c.k == k && c.n_subdomains == n_subdomains && c.ppwl == ppwl &&
        c.strategy == strategy)
      return &c;
  }
  return nullptr;
}

bool ExperimentReport::all_converged() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CellRecord& c) { return c.converged && c.error.empty(); });
}

CellRecord run_cell(double k, std::size_t n_glob, double ppwl, std::size_t n_subdomains,
                    const SubdomainStrategy& strategy, const SolverConfig& outer,
                    double rhs_scale, std::size_t threads) {
  CellRecord rec;
  rec.k = k;
  rec.n_glob = n_glob;
  rec.n_subdomains = n_subdomains;
  rec.ppwl = ppwl;
  rec.strategy = strategy.kind;
  rec.inner_tol = strategy.kind == SubdomainSolver::direct ? 0.0 : strategy.inner.rel_tol;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid = build_grid(k, n_glob);
    const SparseMatrix a = assemble_matrix(grid);
    Vector f = assemble_rhs(grid);
    for (double& v : f) v *= rhs_scale;
    const Partition partition = build_partition(grid, n_subdomains);
    RASPreconditioner ras(a, partition, strategy, threads);
    const auto t1 = std::chrono::steady_clock::now();
    rec.setup_time = std::chrono::duration<double>(t1 - t0).count();

    const Vector x0(a.rows(), 0.0);
    const SolveResult res = fgmres(as_operator(a), ras.as_operator(), f, x0, outer);
    rec.solve_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    rec.outer_iterations = res.report.iterations;
    rec.converged = res.report.converged;
    rec.final_residual = res.report.final_true_relative_residual;
    const InnerStats& s = ras.stats();
    rec.total_inner_iterations = s.total_iterations;
    rec.subdomain_solves = s.solves;
    rec.avg_inner_iterations = s.average();
    rec.unconverged_inner = s.unconverged;
    rec.max_inner_true_residual = s.max_true_relative_residual;
  } catch (const std::exception& e) {
    rec.converged = false;
    rec.error = e.what();
  }
  return rec;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport report;
  for (double k : cfg.k_values) {
    const std::size_t n_glob = cfg.n_glob ? *cfg.n_glob : preset_n_glob(k, cfg.ppwl);
    double ppwl = cfg.ppwl;
    if (cfg.n_glob) {
      // Explicit grids report the nominal resolution, rounded to 2 decimals.
      const double h = 1.0 / static_cast<double>(n_glob + 1);
      ppwl = std::round(200.0 * std::numbers::pi / (k * h)) / 100.0;
    }
    for (std::size_t n : cfg.subdomain_counts) {
      report.cells.push_back(
          run_cell(k, n_glob, ppwl, n, cfg.strategy, cfg.outer, cfg.rhs_scale, cfg.threads));
    }
  }
  report.sort();
  return report;
}

std::vector<ExperimentConfig> table_presets(int table, double max_k) {
  if (table < 1 || table > 5) {
    throw std::invalid_argument("table must be in 1..5, got " + std::to_string(table));
  }
  ExperimentConfig base;
  for (double k : {20.0, 40.0, 80.0, 160.0})
    if (k <= max_k) base.k_values.push_back(k);
  base.subdomain_counts = {4, 9, 16, 25};
  switch (table) {
    case 1:
      base.strategy.kind = SubdomainSolver::direct;
      break;
    case 2:
    case 3:
    case 4:
      base.strategy.kind = SubdomainSolver::deflated_gmres;
      base.strategy.inner.rel_tol = table == 2 ? 1e-10 : table == 3 ? 1e-5 : 1e-2;
      break;
    case 5:
      base.strategy.kind = SubdomainSolver::ilu0_gmres;
      base.strategy.inner.rel_tol = 1e-2;
      break;
  }
  std::vector<ExperimentConfig> out;
  for (int ppwl : {10, 20}) {
    if (table == 5 && ppwl == 20) continue;
    ExperimentConfig c = base;
    c.ppwl = ppwl;
    out.push_back(c);
  }
  return out;
}

TableFormat parse_table_format(const std::string& name) {
  if (name == "text") return TableFormat::text;
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw std::invalid_argument("unknown format '" + name + "'");
}

namespace {

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string format_cell(const CellRecord& c) {
  if (!c.error.empty()) return "fail";
  std::string s = std::to_string(c.outer_iterations);
  if (!c.converged) s += "*";
  if (c.strategy != SubdomainSolver::direct)
    s += " (" + std::to_string(c.avg_inner_iterations) + ")";
  return s;
}

std::string emit_text(const ExperimentReport& report) {
  // One block per (ppwl, strategy, tolerance); rows k / n_glob, columns N.
  using Key = std::tuple<double, SubdomainSolver, double>;
  std::map<Key, std::vector<const CellRecord*>> groups;
  for (const auto& c : report.cells) groups[{c.ppwl, c.strategy, c.inner_tol}].push_back(&c);

  std::ostringstream out;
  bool first = true;
  for (const auto& [key, cells] : groups) {
    const auto& [ppwl, strategy, tol] = key;
    if (!first) out << '\n';
    first = false;
    out << format_number(ppwl) << " ppwl, " << to_string(strategy);
    if (strategy != SubdomainSolver::direct) out << ", inner tol " << format_number(tol);
    out << '\n';

    std::vector<std::size_t> ns;
    std::vector<std::pair<double, std::size_t>> rows;
    for (const CellRecord* c : cells) {
      if (std::find(ns.begin(), ns.end(), c->n_subdomains) == ns.end())
        ns.push_back(c->n_subdomains);
      const std::pair<double, std::size_t> row{c->k, c->n_glob};
      if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    }
    std::sort(ns.begin(), ns.end());
    std::sort(rows.begin(), rows.end());

    constexpr int kw = 6, cw = 12;
    out << std::setw(kw) << "k" << std::setw(kw + 2) << "n_glob" << " |";
    for (std::size_t n : ns) out << std::setw(cw) << ("N=" + std::to_string(n));
    out << '\n' << std::string(kw * 2 + 4 + cw * ns.size(), '-') << '\n';
    for (const auto& [k, n_glob] : rows) {
      out << std::setw(kw) << format_number(k) << std::setw(kw + 2) << n_glob << " |";
      for (std::size_t n : ns) {
        std::string text = "-";
        for (const CellRecord* c : cells)
          if (c->k == k && c->n_glob == n_glob && c->n_subdomains == n) text = format_cell(*c);
        out << std::setw(cw) << text;
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string emit_csv(const ExperimentReport& report, bool timings) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& c : report.cells) {
    out << format_number(c.k) << ',' << c.n_glob << ',' << c.n_subdomains << ','
        << format_number(c.ppwl) << ',' << to_string(c.strategy) << ','
        << format_number(c.inner_tol) << ',' << c.outer_iterations << ','
        << c.avg_inner_iterations << ',' << c.total_inner_iterations << ','
        << c.subdomain_solves << ',' << (c.converged ? 1 : 0) << ','
        << (timings ? format_number(c.setup_time) : "0") << ','
        << (timings ? format_number(c.solve_time) : "0") << ','
        << std::setprecision(6) << std::scientific << c.final_residual
        << std::defaultfloat << '\n';
  }
  return out.str();
}

std::string emit_json(const ExperimentReport& report, bool timings) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    nlohmann::ordered_json j;
    j["k"] = c.k;
    j["n_glob"] = c.n_glob;
    j["N"] = c.n_subdomains;
    j["ppwl"] = c.ppwl;
    j["strategy"] = to_string(c.strategy);
    j["inner_tol"] = c.inner_tol;
    j["outer_iters"] = c.outer_iterations;
    j["avg_inner"] = c.avg_inner_iterations;
    j["total_inner"] = c.total_inner_iterations;
    j["solves"] = c.subdomain_solves;
    j["unconverged_inner"] = c.unconverged_inner;
    j["converged"] = c.converged;
    j["setup_s"] = timings ? c.setup_time : 0.0;
    j["solve_s"] = timings ? c.solve_time : 0.0;
    j["final_rel_res"] = c.final_residual;
    if (!c.error.empty()) j["error"] = c.error;
    cells.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

}  // namespace

std::string emit_table(const ExperimentReport& report, TableFormat format,
                       bool include_timings) {
  if (report.cells.empty()) throw Error("emit_table: report has no cells");
  switch (format) {
    case TableFormat::text:
      return emit_text(report);
    case TableFormat::csv:
      return emit_csv(report, include_timings);
    case TableFormat::json:
      return emit_json(report, include_timings);
  }
  throw Error("emit_table: unknown format");
}

std::size_t threads_from_env() {
  const char* env = std::getenv("HSOLVE_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<std::size_t>(v);
}

}  // namespace hsolve
