// dualmarg: primal/dual NFG inference for Ising and Potts models.
// Subcommands: exact | bp | swp | map | fixedpoint | bounds | experiment.
// Exit codes: 0 success, 2 validation error, 3 numeric failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "dualmarg/bp.hpp"
#include "dualmarg/csv.hpp"
#include "dualmarg/errors.hpp"
#include "dualmarg/exact.hpp"
#include "dualmarg/experiment.hpp"
#include "dualmarg/mapping.hpp"
#include "dualmarg/model_io.hpp"
#include "dualmarg/swp.hpp"

namespace {

using namespace dualmarg;

int env_partitions() {
  if (const char* v = std::getenv("DUALMARG_THREADS")) {
    const int n = std::atoi(v);
    if (n >= 1) return n;
  }
  return 1;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  return out;
}

void write_marginal_rows(CsvWriter& csv, const std::string& domain,
                         const ExactResult& res) {
  for (std::size_t e = 0; e < res.edge_marginals.size(); ++e) {
    for (std::size_t a = 0; a < res.edge_marginals[e].size(); ++a) {
      csv.field(domain).field("edge").field(static_cast<int>(e))
          .field(static_cast<int>(a)).field(res.edge_marginals[e][a]);
      csv.end_row();
    }
  }
  for (std::size_t v = 0; v < res.vertex_marginals.size(); ++v) {
    for (std::size_t a = 0; a < res.vertex_marginals[v].size(); ++a) {
      csv.field(domain).field("vertex").field(static_cast<int>(v))
          .field(static_cast<int>(a)).field(res.vertex_marginals[v][a]);
      csv.end_row();
    }
  }
}

int cmd_exact(const std::string& model_path, const std::string& domain,
              std::uint64_t budget, const std::string& out_path) {
  Model m = instantiate(load_model_input(model_path));
  FactorSet primal = make_factors(m);
  EnumerationOptions opts{budget, env_partitions()};

  auto out = open_out(out_path);
  CsvWriter csv(out);
  csv.header({"domain", "kind", "index", "a", "value"});

  bool did_primal = false, did_dual = false;
  ExactResult pe, de;
  if (domain == "primal" || domain == "both") {
    pe = primal_exact(m.graph, primal, opts);
    write_marginal_rows(csv, "primal", pe);
    did_primal = true;
  }
  if (domain == "dual" || domain == "both") {
    de = dual_exact(m.graph, dual_factors(m.graph, primal), opts);
    write_marginal_rows(csv, "dual", de);
    did_dual = true;
  }
  if (did_primal) {
    csv.field("primal").field("Z").blank().blank().field(pe.z);
    csv.end_row();
  }
  if (did_dual) {
    csv.field("dual").field("Z").blank().blank().field(de.z);
    csv.end_row();
    if (de.signed_marginals) {
      std::cout << "note: dual factors are signed; outputs are marginal functions\n";
    }
  }
  if (did_primal && did_dual) {
    csv.field("both").field("alpha").blank().blank().field(de.z / pe.z);
    csv.end_row();
  }
  std::cout << "exact: wrote " << out_path << "\n";
  return 0;
}

int cmd_bp(const std::string& model_path, const std::string& domain,
           const BpOptions& opts, const std::string& out_path) {
  Model m = instantiate(load_model_input(model_path));
  FactorSet primal = make_factors(m);
  FactorGraph fg = domain == "primal"
                       ? build_primal_fg(m.graph, primal)
                       : build_dual_fg(m.graph, dual_factors(m.graph, primal));
  BpReport report = run_bp(fg, opts);
  auto beliefs = bp_edge_marginals(fg, report);

  auto out = open_out(out_path);
  CsvWriter csv(out);
  csv.header({"edge", "a", "belief"});
  for (std::size_t e = 0; e < beliefs.size(); ++e) {
    for (std::size_t a = 0; a < beliefs[e].size(); ++a) {
      csv.field(static_cast<int>(e)).field(static_cast<int>(a)).field(beliefs[e][a]);
      csv.end_row();
    }
  }
  std::cout << "bp: domain=" << domain << " converged=" << (report.converged ? 1 : 0)
            << " iterations=" << report.iterations
            << " final_delta=" << format_double(report.final_delta) << "\n";
  return 0;
}

int cmd_swp(const std::string& model_path, std::uint64_t sweeps, std::uint64_t burn_in,
            std::uint64_t seed, const std::string& out_path) {
  Model m = instantiate(load_model_input(model_path));
  if (m.kind != ModelKind::ising) {
    throw ValidationError("swp is defined for the ising model");
  }
  SwpEstimate est = swp_estimate(m.graph, m.params, sweeps, burn_in, seed);
  auto out = open_out(out_path);
  CsvWriter csv(out);
  csv.header({"edge", "p_hat", "std_err"});
  for (std::size_t e = 0; e < est.p_hat.size(); ++e) {
    csv.field(static_cast<int>(e)).field(est.p_hat[e]).field(est.std_err[e]);
    csv.end_row();
  }
  std::cout << "swp: seed=" << est.seed << " sweeps=" << est.sweeps
            << " burn_in=" << est.burn_in << " steps=" << est.steps
            << " samples=" << est.samples << " batches=" << est.batches
            << " acceptance_rate=" << format_double(est.acceptance_rate)
            << " rng=" << CounterRng::kName << "\n";
  return 0;
}

int cmd_map(const std::string& csv_path, const std::string& model_path,
            const std::string& direction, const std::string& out_path) {
  Model m = instantiate(load_model_input(model_path));
  FactorSet primal = make_factors(m);
  FactorSet dual = dual_factors(m.graph, primal);

  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open marginals csv: " + csv_path);
  CsvTable table = read_csv(in);
  if (table.header.size() < 3) {
    throw ValidationError("marginals csv needs columns (edge, a, value)");
  }
  const int q = primal.q;
  std::map<int, std::vector<double>> by_edge;
  for (const auto& row : table.rows) {
    if (row.size() < 3) throw ValidationError("marginals csv: short row");
    const int e = std::stoi(row[0]);
    const int a = std::stoi(row[1]);
    if (e < 0 || e >= m.graph.edge_count() || a < 0 || a >= q) {
      throw ValidationError("marginals csv: edge or symbol out of range");
    }
    auto& vec = by_edge.try_emplace(e, std::vector<double>(q, 0.0)).first->second;
    vec[a] = std::stod(row[2]);
  }

  const bool to_primal = direction == "dual-to-primal";
  auto out = open_out(out_path);
  CsvWriter csv(out);
  csv.header({"edge", "a", to_primal ? "pi_p" : "pi_d"});
  for (const auto& [e, vec] : by_edge) {
    auto mapped = to_primal
                      ? map_edge_dual_to_primal(vec, primal.edge[e], dual.edge[e])
                      : map_edge_primal_to_dual(vec, primal.edge[e], dual.edge[e]);
    for (int a = 0; a < q; ++a) {
      csv.field(e).field(a).field(mapped[a]);
      csv.end_row();
    }
  }
  std::cout << "map: " << direction << ", " << by_edge.size() << " edges -> "
            << out_path << "\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, std::string out_path) {
  ExperimentSpec spec = load_experiment_spec(config_path);
  if (out_path.empty()) out_path = spec.out_path;
  if (out_path.empty()) {
    throw ValidationError("experiment needs an output path (--out or \"out\" in the config)");
  }
  EnumerationOptions opts;
  opts.partitions = env_partitions();
  auto records = run_experiment(spec, opts);
  auto out = open_out(out_path);
  write_error_records(out, records);
  std::cout << "experiment: " << records.size() << " records -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal/dual normal-factor-graph marginal inference for Ising and "
               "Potts models"};
  app.require_subcommand(1);

  std::string model_path, out_path, csv_path, config_path;
  std::string domain = "both";
  std::string direction = "dual-to-primal";
  std::uint64_t budget = std::uint64_t{1} << 24;
  BpOptions bp_opts;
  std::uint64_t sweeps = 100000, burn_in = 1000, seed = 1;
  double grid_min = 0.01, grid_max = 3.0, grid_step = 0.01;
  int q = 3;
  std::string fp_model = "ising";

  auto* exact = app.add_subcommand("exact", "Brute-force marginals, Z and alpha");
  exact->add_option("model", model_path, "model JSON file")->required();
  exact->add_option("--domain", domain, "primal|dual|both")
      ->check(CLI::IsMember({"primal", "dual", "both"}));
  exact->add_option("--budget", budget, "max enumeration terms");
  exact->add_option("--out", out_path, "output CSV")->required();

  auto* bp = app.add_subcommand("bp", "Loopy sum-product belief propagation");
  bp->add_option("model", model_path)->required();
  bp->add_option("--domain", domain, "primal|dual")
      ->check(CLI::IsMember({"primal", "dual"}))
      ->required();
  bp->add_option("--damping", bp_opts.damping);
  bp->add_option("--tol", bp_opts.tol);
  bp->add_option("--max-iter", bp_opts.max_iter);
  bp->add_option("--out", out_path)->required();

  auto* swp = app.add_subcommand("swp", "Subgraphs-world sampling of dual marginals");
  swp->add_option("model", model_path)->required();
  swp->add_option("--sweeps", sweeps);
  swp->add_option("--burn-in", burn_in);
  swp->add_option("--seed", seed);
  swp->add_option("--out", out_path)->required();

  auto* map = app.add_subcommand("map", "Map edge marginals between domains");
  map->add_option("marginals", csv_path, "CSV of (edge, a, value)")->required();
  map->add_option("model", model_path)->required();
  map->add_option("--direction", direction)
      ->check(CLI::IsMember({"dual-to-primal", "primal-to-dual"}));
  map->add_option("--out", out_path)->required();

  auto* fixedpoint = app.add_subcommand("fixedpoint", "Closed-form fixed-point curves");
  fixedpoint->add_option("--model", fp_model)->check(CLI::IsMember({"ising", "potts"}));
  fixedpoint->add_option("--q", q);
  fixedpoint->add_option("--min", grid_min);
  fixedpoint->add_option("--max", grid_max);
  fixedpoint->add_option("--step", grid_step);
  fixedpoint->add_option("--out", out_path)->required();

  auto* bounds = app.add_subcommand("bounds", "Lower-bound curves for both domains");
  bounds->add_option("--min", grid_min);
  bounds->add_option("--max", grid_max);
  bounds->add_option("--step", grid_step);
  bounds->add_option("--out", out_path)->required();

  auto* experiment = app.add_subcommand("experiment", "Seeded error sweeps vs the oracle");
  experiment->add_option("config", config_path, "experiment JSON")->required();
  experiment->add_option("--out", out_path, "output CSV (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exact->parsed()) return cmd_exact(model_path, domain, budget, out_path);
    if (bp->parsed()) return cmd_bp(model_path, domain, bp_opts, out_path);
    if (swp->parsed()) return cmd_swp(model_path, sweeps, burn_in, seed, out_path);
    if (map->parsed()) return cmd_map(csv_path, model_path, direction, out_path);
    if (fixedpoint->parsed()) {
      auto out = open_out(out_path);
      if (fp_model == "ising") {
        emit_curves(out, CurveKind::fixedpoint_ising,
                    uniform_grid(grid_min, grid_max, grid_step));
      } else {
        emit_curves(out, CurveKind::fixedpoint_potts,
                    uniform_grid(grid_min, grid_max, grid_step), q);
      }
      std::cout << "fixedpoint: wrote " << out_path << "\n";
      return 0;
    }
    if (bounds->parsed()) {
      auto out = open_out(out_path);
      emit_curves(out, CurveKind::bounds, uniform_grid(grid_min, grid_max, grid_step));
      std::cout << "bounds: wrote " << out_path << "\n";
      return 0;
    }
    if (experiment->parsed()) return cmd_experiment(config_path, out_path);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
