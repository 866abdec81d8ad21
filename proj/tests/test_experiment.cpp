#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support/test_oracles.hpp"

#include "dualmarg/csv.hpp"
#include "dualmarg/errors.hpp"
#include "dualmarg/experiment.hpp"
#include "dualmarg/mapping.hpp"

using namespace dualmarg;

TEST_SUITE("experiment") {

TEST_CASE("model json round trip") {
  const std::string text = R"({
    "graph": {"kind": "edges", "vertex_count": 3, "edges": [[0,1],[1,2],[0,2]]},
    "model": "ising", "q": 2,
    "couplings": 0.5, "fields": [0.3, 0.3, 0.3]
  })";
  Model m = instantiate(parse_model_input(text));
  CHECK(m.graph.vertex_count == 3);
  CHECK(m.params.couplings == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(m.params.fields == std::vector<double>{0.3, 0.3, 0.3});
}

TEST_CASE("random coupling specs are seeded and reproducible") {
  const std::string text = R"({
    "graph": {"kind": "grid", "rows": 3, "cols": 3, "periodic": true},
    "model": "ising",
    "couplings": {"kind": "halfnormal", "sigma2": 0.25, "seed": 7},
    "fields": 0.0
  })";
  Model a = instantiate(parse_model_input(text));
  Model b = instantiate(parse_model_input(text));
  CHECK(a.params.couplings == b.params.couplings);
  for (double c : a.params.couplings) CHECK(c >= 0.0);
  Model c = instantiate(parse_model_input(text), std::uint64_t{8});
  CHECK(a.params.couplings != c.params.couplings);

  const std::string uniform_text = R"({
    "graph": {"kind": "complete", "n": 10},
    "model": "ising",
    "couplings": {"kind": "uniform", "min": 0.05, "max": 0.65, "seed": 3},
    "fields": 0.0
  })";
  Model u = instantiate(parse_model_input(uniform_text));
  for (double x : u.params.couplings) {
    CHECK(x >= 0.05);
    CHECK(x <= 0.65);
  }
}

TEST_CASE("malformed model json is a validation error") {
  CHECK_THROWS_AS(parse_model_input("{"), ValidationError);
  CHECK_THROWS_AS(parse_model_input(R"({"model":"ising"})"), ValidationError);
  CHECK_THROWS_AS(parse_model_input(
                      R"({"graph":{"kind":"blob"},"model":"ising"})"),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_model_input(
          R"({"graph":{"kind":"complete","n":4},"model":"xy"})"),
      ValidationError);
}

TEST_CASE("relative error") {
  CHECK(relative_error(std::vector<double>{0.84, 0.16},
                       std::vector<double>{0.80, 0.20}) ==
        doctest::Approx(0.05).epsilon(1e-12));
  CHECK(relative_error(std::vector<double>{0.8, 0.2},
                       std::vector<double>{0.8, 0.2}) == 0.0);
  CHECK(relative_error(std::vector<double>{0.7071, 0.2929},
                       std::vector<double>{0.8536, 0.1464}) ==
        doctest::Approx(0.1716).epsilon(1e-3));
  CHECK_THROWS_AS(relative_error(std::vector<double>{0.5, 0.5},
                                 std::vector<double>{0.0, 1.0}),
                  ValidationError);
}

TEST_CASE("uniform grid construction") {
  auto grid = uniform_grid(0.05, 0.65, 0.2);
  REQUIRE(grid.size() == 4);
  CHECK(grid[0] == doctest::Approx(0.05));
  CHECK(grid[3] == doctest::Approx(0.65));
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), ValidationError);
}

TEST_CASE("curves carry the critical markers") {
  std::ostringstream out;
  emit_curves(out, CurveKind::fixedpoint_ising, uniform_grid(0.01, 1.0, 0.01));
  const std::string text = out.str();
  CHECK(text.find("beta_j,pi_star_0,pi_star_1,annotation") == 0);
  CHECK(text.find("critical") != std::string::npos);
  CHECK(text.find("0.85355339059327") != std::string::npos);

  std::ostringstream bounds_out;
  emit_curves(bounds_out, CurveKind::bounds, uniform_grid(0.1, 2.0, 0.1));
  CHECK(bounds_out.str().find("0.70710678118654") != std::string::npos);

  std::ostringstream potts_out;
  emit_curves(potts_out, CurveKind::fixedpoint_potts, uniform_grid(0.5, 2.0, 0.5), 5);
  CHECK(potts_out.str().find("0.72360679774997") != std::string::npos);

  CHECK_THROWS_AS(emit_curves(out, CurveKind::bounds, {0.0, 0.5}), ValidationError);
}

TEST_CASE("csv writer quoting and width checks") {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.header({"a", "b"});
  csv.field("x,y").field(0.5);
  csv.end_row();
  CHECK(out.str() == "a,b\n\"x,y\",0.5\n");
  csv.field("only one");
  CHECK_THROWS_AS(csv.end_row(), ValidationError);
}

TEST_CASE("experiment: single point, exact method only") {
  ExperimentSpec spec;
  spec.model = parse_model_input(R"({
    "graph": {"kind": "edges", "vertex_count": 3, "edges": [[0,1],[1,2],[0,2]]},
    "model": "ising", "couplings": 0.4, "fields": 0.15
  })");
  spec.methods = {Method::exact};
  spec.sweep = SweepVariable::beta_j;
  spec.grid = {0.4};
  spec.realizations = 1;
  spec.seed = 5;
  auto records = run_experiment(spec);
  REQUIRE(records.size() == 1);
  CHECK(records[0].mean == 0.0);
  CHECK(records[0].median == 0.0);
  std::ostringstream out;
  write_error_records(out, records);
  CHECK(out.str().find("sweep_value,method,mean_rel_error") == 0);
  CHECK(out.str().find("exact") != std::string::npos);
}

TEST_CASE("experiment pipeline on the triangle, all methods") {
  ExperimentSpec spec;
  spec.model = parse_model_input(R"({
    "graph": {"kind": "edges", "vertex_count": 3, "edges": [[0,1],[1,2],[0,2]]},
    "model": "ising", "couplings": 0.4, "fields": 0.2
  })");
  spec.methods = {Method::exact, Method::bp_primal, Method::bp_dual_map,
                  Method::swp_map};
  spec.sweep = SweepVariable::beta_j;
  spec.grid = {0.3, 0.5};
  spec.realizations = 2;
  spec.seed = 11;
  spec.swp.sweeps = 5000;
  spec.swp.burn_in = 200;
  auto records = run_experiment(spec);
  REQUIRE(records.size() == 8);  // 2 grid points x 4 methods
  for (const auto& r : records) {
    CHECK(std::isfinite(r.mean));
    CHECK(r.mean >= 0.0);
    CHECK(r.mean < 0.5);
  }
}

TEST_CASE("experiment csv output is byte-identical across runs") {
  const std::string config = R"({
    "model": {
      "graph": {"kind": "grid", "rows": 2, "cols": 3, "periodic": false},
      "model": "ising", "couplings": 0.1, "fields": 0.1
    },
    "methods": ["bp-primal", "swp+map"],
    "sweep": {"variable": "betaJ", "grid": [0.2, 0.4]},
    "realizations": 2,
    "seed": 99,
    "swp": {"sweeps": 2000, "burn_in": 100}
  })";
  ExperimentSpec spec = parse_experiment_spec(config);
  std::ostringstream a, b;
  write_error_records(a, run_experiment(spec));
  write_error_records(b, run_experiment(spec));
  CHECK(a.str() == b.str());
  CHECK(a.str().find("swp+map") != std::string::npos);
}

TEST_CASE("experiment validation") {
  ExperimentSpec spec;
  spec.model = parse_model_input(R"({
    "graph": {"kind": "complete", "n": 30},
    "model": "ising", "couplings": 0.1, "fields": 0.0
  })");
  spec.methods = {Method::bp_primal};
  spec.grid = {0.1};
  // oracle infeasible: 2^30 states
  CHECK_THROWS_AS(run_experiment(spec), ValidationError);

  spec.model = parse_model_input(R"({
    "graph": {"kind": "complete", "n": 4},
    "model": "ising", "couplings": 0.1, "fields": 0.0
  })");
  spec.methods = {Method::swp_map};  // zero field: chain not irreducible
  CHECK_THROWS_AS(run_experiment(spec), ValidationError);

  spec.methods = {Method::bp_primal};
  spec.grid = {0.3, 0.2};  // not increasing
  CHECK_THROWS_AS(run_experiment(spec), ValidationError);
}

TEST_CASE("half-normal sweep draws fresh couplings per realization") {
  ExperimentSpec spec;
  spec.model = parse_model_input(R"({
    "graph": {"kind": "grid", "rows": 2, "cols": 2, "periodic": false},
    "model": "ising", "couplings": 0.0, "fields": 0.0
  })");
  spec.methods = {Method::bp_dual_map};
  spec.sweep = SweepVariable::sigma2;
  spec.grid = {0.5};
  spec.realizations = 3;
  spec.seed = 21;
  auto records = run_experiment(spec);
  REQUIRE(records.size() == 1);
  CHECK(std::isfinite(records[0].mean));
}

}  // TEST_SUITE
