#include <doctest.h>

#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "hsolve/error.hpp"
#include "hsolve/harness.hpp"
#include "hsolve/reference_tables.hpp"

using namespace hsolve;

namespace {

CellRecord fake_cell(SubdomainSolver kind, std::size_t outer, std::size_t avg) {
  CellRecord c;
  c.k = 40;
  c.n_glob = 60;
  c.n_subdomains = 9;
  c.ppwl = 10;
  c.strategy = kind;
  c.inner_tol = kind == SubdomainSolver::direct ? 0.0 : 1e-10;
  c.outer_iterations = outer;
  c.avg_inner_iterations = avg;
  c.converged = true;
  return c;
}

}  // namespace

TEST_CASE("grid presets") {
  CHECK(preset_n_glob(20, 10) == 30);
  CHECK(preset_n_glob(80, 10) == 120);
  CHECK(preset_n_glob(20, 20) == 60);
  CHECK(preset_n_glob(160, 20) == 480);
  CHECK_THROWS_AS(preset_n_glob(20, 15), std::invalid_argument);
}

TEST_CASE("table presets") {
  std::size_t cells = 0;
  for (const auto& c : table_presets(1, 40)) {
    CHECK(c.strategy.kind == SubdomainSolver::direct);
    cells += c.k_values.size() * c.subdomain_counts.size();
  }
  CHECK(cells == 16);
  CHECK(table_presets(2, 80)[0].strategy.inner.rel_tol == 1e-10);
  CHECK(table_presets(3, 80)[0].strategy.inner.rel_tol == 1e-5);
  CHECK(table_presets(4, 80)[1].strategy.inner.rel_tol == 1e-2);
  const auto t5 = table_presets(5, 160);
  REQUIRE(t5.size() == 1);
  CHECK(t5[0].ppwl == 10);
  CHECK(t5[0].k_values.size() == 4);
  CHECK(t5[0].strategy.kind == SubdomainSolver::ilu0_gmres);
  CHECK_THROWS_AS(table_presets(6, 80), std::invalid_argument);
}

TEST_CASE("reference lookup") {
  CHECK(reference_cell(1, 10, 20, 4)->outer == 20);
  CHECK(reference_cell(2, 10, 40, 9)->outer == 62);
  CHECK(reference_cell(2, 10, 40, 9)->avg_inner == 29);
  CHECK(reference_cell(4, 20, 160, 25)->outer == 584);
  CHECK(reference_cell(5, 10, 80, 16)->avg_inner == 83);
  CHECK_FALSE(reference_cell(5, 20, 80, 16));
  CHECK_FALSE(reference_cell(1, 10, 30, 4));
}

TEST_CASE("table formatting") {
  ExperimentReport direct;
  direct.cells.push_back(fake_cell(SubdomainSolver::direct, 20, 0));
  const std::string t1 = emit_table(direct, TableFormat::text);
  CHECK(t1.find(" 20\n") != std::string::npos);
  CHECK(t1.find('(') == std::string::npos);

  ExperimentReport defl;
  defl.cells.push_back(fake_cell(SubdomainSolver::deflated_gmres, 62, 29));
  CHECK(emit_table(defl, TableFormat::text).find("62 (29)") != std::string::npos);

  defl.cells[0].converged = false;
  CHECK(emit_table(defl, TableFormat::text).find("62* (29)") != std::string::npos);

  CHECK_THROWS_AS(emit_table(ExperimentReport{}, TableFormat::csv), Error);
  CHECK(parse_table_format("json") == TableFormat::json);
  CHECK_THROWS_AS(parse_table_format("xml"), std::invalid_argument);

  const std::string csv = emit_table(defl, TableFormat::csv, false);
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  const auto j = nlohmann::json::parse(emit_table(defl, TableFormat::json, false));
  CHECK(j["cells"].size() == 1);
  CHECK(j["cells"][0]["outer_iters"] == 62);
  CHECK(j["cells"][0]["strategy"] == "deflation");
}

TEST_CASE("run_experiment on the smallest table cell") {
  ExperimentConfig cfg;
  cfg.k_values = {20};
  cfg.subdomain_counts = {4};
  const ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.cells.size() == 1);
  const CellRecord& c = r.cells[0];
  CHECK(c.error.empty());
  CHECK(c.n_glob == 30);
  CHECK(c.converged);
  CHECK(c.outer_iterations >= 17);
  CHECK(c.outer_iterations <= 23);
  CHECK(c.final_residual <= 1e-6);
  CHECK(c.subdomain_solves == 4 * c.outer_iterations);
  CHECK(r.find(20, 4, 10, SubdomainSolver::direct) == &r.cells[0]);

  // explicit grid overrides the preset and reports the nominal resolution
  cfg.n_glob = 30;
  const ExperimentReport e = run_experiment(cfg);
  CHECK(e.cells[0].ppwl == doctest::Approx(9.74));
  CHECK(e.cells[0].outer_iterations == c.outer_iterations);
}

TEST_CASE("byte-identical output without timings") {
  ExperimentConfig cfg;
  cfg.k_values = {20};
  cfg.subdomain_counts = {4, 9};
  cfg.strategy.kind = SubdomainSolver::deflated_gmres;
  cfg.strategy.inner.rel_tol = 1e-5;
  const std::string a = emit_table(run_experiment(cfg), TableFormat::csv, false);
  const std::string b = emit_table(run_experiment(cfg), TableFormat::csv, false);
  CHECK(a == b);
}

TEST_CASE("iteration counts are invariant to scaling f") {
  for (SubdomainSolver kind : {SubdomainSolver::deflated_gmres, SubdomainSolver::ilu0_gmres}) {
    ExperimentConfig cfg;
    cfg.k_values = {20};
    cfg.subdomain_counts = {4, 9};
    cfg.strategy.kind = kind;
    cfg.strategy.inner.rel_tol = 1e-5;
    const ExperimentReport base = run_experiment(cfg);
    cfg.rhs_scale = 1e3;
    const ExperimentReport scaled = run_experiment(cfg);
    for (std::size_t i = 0; i < base.cells.size(); ++i) {
      CHECK(base.cells[i].outer_iterations == scaled.cells[i].outer_iterations);
      CHECK(base.cells[i].total_inner_iterations == scaled.cells[i].total_inner_iterations);
    }
  }
}

TEST_CASE("cell errors are recorded") {
  const CellRecord c = run_cell(20, 30, 10, 5, {}, {});
  CHECK_FALSE(c.converged);
  CHECK_FALSE(c.error.empty());
  ExperimentReport r;
  r.cells.push_back(c);
  CHECK_FALSE(r.all_converged());
  CHECK(emit_table(r, TableFormat::text).find("fail") != std::string::npos);
}

TEST_CASE("thread count from the environment") {
  ::unsetenv("HSOLVE_THREADS");
  CHECK(threads_from_env() == 1);
  ::setenv("HSOLVE_THREADS", "3", 1);
  CHECK(threads_from_env() == 3);
  ::setenv("HSOLVE_THREADS", "zero", 1);
  CHECK(threads_from_env() == 1);
  ::unsetenv("HSOLVE_THREADS");
}
