// Command line driver: parameter sweeps, benchmark table presets, matrix export
// and the runtime self test.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsolve/error.hpp"
#include "hsolve/grid_fem.hpp"
#include "hsolve/harness.hpp"
#include "hsolve/matrix_market.hpp"
#include "hsolve/reference_tables.hpp"
#include "hsolve/selftest.hpp"

namespace {

using namespace hsolve;

constexpr int kUsageError = 2;

struct OutputOptions {
  std::string format = "text";
  std::string csv_path;
  std::string json_path;
  bool strict = false;
  bool no_timings = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "stdout format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  cmd->add_option("--csv", o.csv_path, "also write CSV to this path");
  cmd->add_option("--json", o.json_path, "also write JSON to this path");
  cmd->add_flag("--strict", o.strict, "exit 1 if any cell fails or does not converge");
  cmd->add_flag("--no-timings", o.no_timings, "write zero timings (reproducible bytes)");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("write failed: " + path);
}

int emit(const ExperimentReport& report, const OutputOptions& o) {
  const bool timings = !o.no_timings;
  std::cout << emit_table(report, parse_table_format(o.format), timings);
  if (!o.csv_path.empty()) write_file(o.csv_path, emit_table(report, TableFormat::csv, timings));
  if (!o.json_path.empty())
    write_file(o.json_path, emit_table(report, TableFormat::json, timings));
  for (const auto& c : report.cells) {
    if (!c.error.empty())
      std::cerr << "cell k=" << c.k << " N=" << c.n_subdomains << " failed: " << c.error << '\n';
  }
  return o.strict && !report.all_converged() ? 1 : 0;
}

void print_reference_comparison(const ExperimentReport& report, int table) {
  std::cout << "\nreference comparison (table " << table << ")\n";
  for (const auto& c : report.cells) {
    const auto ref = reference_cell(table, static_cast<int>(c.ppwl), static_cast<int>(c.k),
                                    static_cast<int>(c.n_subdomains));
    if (!ref) continue;
    std::cout << "  ppwl " << c.ppwl << " k " << c.k << " N " << c.n_subdomains << ": outer "
              << c.outer_iterations << " vs " << ref->outer;
    if (table > 1) std::cout << ", inner " << c.avg_inner_iterations << " vs " << ref->avg_inner;
    std::cout << '\n';
  }
}

// Flat config files carry no section headers; bare keys belong to the
// subcommand being run unless they name a global option.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App& app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto subs = app_.get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && app_.get_option_no_throw("--" + item.name) == nullptr)
        item.parents.push_back(subs.front()->get_name());
    }
    return items;
  }

 private:
  const CLI::App& app_;
};

// --config is global, but users write it after the subcommand too.
std::vector<std::string> hoist_config(int argc, char** argv) {
  std::vector<std::string> front, rest;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      front.push_back(a);
      front.push_back(argv[++i]);
    } else if (a.rfind("--config=", 0) == 0) {
      front.push_back(a);
    } else {
      rest.push_back(a);
    }
  }
  front.insert(front.end(), rest.begin(), rest.end());
  // CLI11 consumes the vector from the back.
  return {front.rbegin(), front.rend()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted additive Schwarz / deflated GMRES experiments for 2D Helmholtz"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; keys mirror the long flags");
  app.config_formatter(std::make_shared<SubcommandConfig>(app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::size_t threads = threads_from_env();
  app.add_option("--threads", threads, "subdomain solve threads (default HSOLVE_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  // run
  auto* run = app.add_subcommand("run", "sweep over k and N");
  std::vector<double> ks;
  std::vector<std::size_t> ns{4};
  int ppwl = 10;
  std::optional<std::size_t> n_glob;
  std::string strategy = "direct";
  double inner_tol = 1e-10;
  std::string inner_norm = "original";
  std::size_t inner_restart = 0;
  double outer_tol = 1e-6;
  std::size_t outer_restart = 0;
  std::size_t max_outer = 100000;
  double rhs_scale = 1.0;
  OutputOptions run_out;
  run->add_option("--k", ks, "wave numbers")->required()->check(CLI::PositiveNumber);
  run->add_option("--N", ns, "subdomain counts (perfect squares)");
  run->add_option("--ppwl", ppwl, "grid preset: 10 (n_glob = 1.5k) or 20 (n_glob = 3k)")
      ->check(CLI::IsMember({10, 20}));
  run->add_option("--n-glob", n_glob, "explicit interior nodes per axis");
  run->add_option("--strategy", strategy, "subdomain solver")
      ->check(CLI::IsMember({"direct", "deflation", "ilu0"}));
  run->add_option("--inner-tol", inner_tol, "inner relative tolerance");
  run->add_option("--inner-norm", inner_norm,
                  "deflated inner tolerance relative to ||f|| (original) or ||Pf|| (deflated)")
      ->check(CLI::IsMember({"deflated", "original"}));
  run->add_option("--inner-restart", inner_restart, "inner GMRES restart (0 = none)");
  run->add_option("--outer-tol", outer_tol, "outer relative tolerance");
  run->add_option("--restart", outer_restart, "outer FGMRES restart (0 = none)");
  run->add_option("--max-outer", max_outer, "outer iteration cap");
  run->add_option("--rhs-scale", rhs_scale, "scale of the point source");
  add_output_options(run, run_out);

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "run a benchmark table preset");
  int table = 1;
  double max_k = 80;
  OutputOptions rep_out;
  rep_out.csv_path = "reproduce.csv";
  reproduce->add_option("--table", table, "table preset 1..5")->required()->check(
      CLI::Range(1, 5));
  reproduce->add_option("--max-k", max_k, "largest wave number to include");
  add_output_options(reproduce, rep_out);

  // export-matrix
  auto* exp = app.add_subcommand("export-matrix", "write A (and f) in MatrixMarket format");
  double exp_k = 20;
  std::size_t exp_n = 30;
  std::string exp_path = "A.mtx";
  std::string rhs_path;
  bool symmetric = false;
  exp->add_option("--k", exp_k, "wave number")->check(CLI::PositiveNumber);
  exp->add_option("--n-glob", exp_n, "interior nodes per axis");
  exp->add_option("--out", exp_path, "matrix output path");
  exp->add_option("--rhs-out", rhs_path, "right-hand side output path");
  exp->add_flag("--symmetric", symmetric, "write the lower triangle with a symmetric header");

  auto* selftest = app.add_subcommand("selftest", "run the invariant checks");

  try {
    app.parse(hoist_config(argc, argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*run) {
      ExperimentConfig cfg;
      cfg.k_values = ks;
      cfg.ppwl = ppwl;
      cfg.n_glob = n_glob;
      cfg.subdomain_counts = ns;
      cfg.strategy.kind = parse_subdomain_solver(strategy);
      cfg.strategy.inner.rel_tol = inner_tol;
      cfg.strategy.inner.restart = inner_restart;
      cfg.strategy.deflated_norm =
          inner_norm == "original" ? DeflatedNorm::original : DeflatedNorm::deflated;
      cfg.outer = {outer_tol, max_outer, outer_restart};
      cfg.outer.validate();
      cfg.rhs_scale = rhs_scale;
      cfg.threads = threads;
      return emit(run_experiment(cfg), run_out);
    }
    if (*reproduce) {
      ExperimentReport all;
      for (ExperimentConfig cfg : table_presets(table, max_k)) {
        cfg.threads = threads;
        auto part = run_experiment(cfg);
        all.cells.insert(all.cells.end(), part.cells.begin(), part.cells.end());
      }
      all.sort();
      const int code = emit(all, rep_out);
      if (rep_out.format == "text") print_reference_comparison(all, table);
      return code;
    }
    if (*exp) {
      const GridSpec grid = build_grid(exp_k, exp_n);
      write_matrix_market(exp_path, assemble_matrix(grid),
                          symmetric ? MatrixMarketSymmetry::symmetric
                                    : MatrixMarketSymmetry::general);
      if (!rhs_path.empty()) write_matrix_market_vector(rhs_path, assemble_rhs(grid));
      std::cout << "wrote " << exp_path << " (" << grid.dofs() << " rows)\n";
      return 0;
    }
    if (*selftest) {
      bool ok = true;
      for (const auto& c : run_selftest()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}
