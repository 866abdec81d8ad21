#include "dualmarg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dualmarg/bp.hpp"
#include "dualmarg/csv.hpp"
#include "dualmarg/errors.hpp"
#include "dualmarg/mapping.hpp"
#include "dualmarg/rng.hpp"
#include "dualmarg/swp.hpp"

namespace dualmarg {

std::string method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::bp_primal: return "bp-primal";
    case Method::bp_dual_map: return "bp-dual+map";
    case Method::swp_map: return "swp+map";
  }
  throw ValidationError("unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "exact") return Method::exact;
  if (name == "bp-primal") return Method::bp_primal;
  if (name == "bp-dual+map") return Method::bp_dual_map;
  if (name == "swp+map") return Method::swp_map;
  throw ValidationError("unknown method \"" + name + "\"");
}

double relative_error(std::span<const double> estimate, std::span<const double> exact) {
  if (estimate.empty() || exact.empty()) {
    throw ValidationError("relative_error needs nonempty vectors");
  }
  if (!(exact[0] > 0.0)) {
    throw ValidationError("relative_error requires exact(0) > 0");
  }
  return std::abs(estimate[0] - exact[0]) / exact[0];
}

namespace {

struct Stats {
  double mean;
  double median;
  double stddev;
};

Stats pooled_stats(std::vector<double>& xs) {
  Stats s{0.0, 0.0, 0.0};
  const std::size_t n = xs.size();
  if (n == 0) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(n);
  std::sort(xs.begin(), xs.end());
  s.median = n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  if (n > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(n - 1));
  }
  return s;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.methods.empty()) throw ValidationError("experiment needs at least one method");
  if (spec.grid.empty()) throw ValidationError("experiment grid is empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > spec.grid[i - 1])) {
      throw ValidationError("experiment grid must be strictly increasing");
    }
  }
  if (spec.realizations < 1) throw ValidationError("realizations must be >= 1");
  if (spec.model.kind == ModelKind::potts) {
    throw ValidationError("experiment sweeps are defined for ising models");
  }
}

}  // namespace

std::vector<ErrorRecord> run_experiment(const ExperimentSpec& spec,
                                        const EnumerationOptions& opts) {
  validate_spec(spec);
  // Instantiate once to validate the topology and check oracle feasibility
  // before any work. Couplings are redrawn per instance below.
  Model base = instantiate(spec.model, std::uint64_t{0});
  {
    std::uint64_t n = 1;
    for (int i = 0; i < base.graph.vertex_count; ++i) {
      if (n > opts.budget / base.params.q) {
        throw ValidationError("oracle infeasible: q^N exceeds the enumeration budget");
      }
      n *= base.params.q;
    }
  }
  const bool wants_swp =
      std::find(spec.methods.begin(), spec.methods.end(), Method::swp_map) !=
      spec.methods.end();
  if (wants_swp) {
    for (double bh : base.params.fields) {
      if (!(bh > 0.0)) {
        throw ValidationError(
            "swp+map requires a strictly positive field on every vertex");
      }
    }
  }

  std::vector<ErrorRecord> records;
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    const double sweep_value = spec.grid[gi];
    // pooled errors per method over (edge, realization) pairs of this point
    std::vector<std::vector<double>> errors(spec.methods.size());
    for (int r = 0; r < spec.realizations; ++r) {
      const std::uint64_t inst_seed =
          spec.seed + gi * static_cast<std::uint64_t>(spec.realizations) + r;
      CounterRng rng(inst_seed);

      Model m = base;
      switch (spec.sweep) {
        case SweepVariable::beta_j:
          std::fill(m.params.couplings.begin(), m.params.couplings.end(), sweep_value);
          break;
        case SweepVariable::sigma2: {
          const double sigma = std::sqrt(sweep_value);
          for (double& x : m.params.couplings) x = rng.half_normal(sigma);
          break;
        }
        case SweepVariable::beta_j_x:
          for (double& x : m.params.couplings) x = rng.uniform(0.05, sweep_value);
          break;
      }

      const FactorSet primal = make_factors(m);
      const ExactResult oracle = primal_exact(m.graph, primal, opts);

      for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        std::vector<std::vector<double>> estimate;
        switch (spec.methods[mi]) {
          case Method::exact:
            estimate = oracle.edge_marginals;
            break;
          case Method::bp_primal: {
            const FactorGraph fg = build_primal_fg(m.graph, primal);
            const BpReport rep = run_bp(
                fg, {spec.bp.damping, spec.bp.tol, spec.bp.max_iter, inst_seed});
            estimate = bp_edge_marginals(fg, rep);
            break;
          }
          case Method::bp_dual_map: {
            const FactorSet dual = dual_factors(m.graph, primal);
            const FactorGraph fg = build_dual_fg(m.graph, dual);
            const BpReport rep = run_bp(
                fg, {spec.bp.damping, spec.bp.tol, spec.bp.max_iter, inst_seed});
            const auto dual_beliefs = bp_edge_marginals(fg, rep);
            estimate.resize(dual_beliefs.size());
            for (std::size_t e = 0; e < dual_beliefs.size(); ++e) {
              estimate[e] =
                  map_edge_dual_to_primal(dual_beliefs[e], primal.edge[e], dual.edge[e]);
            }
            break;
          }
          case Method::swp_map: {
            const FactorSet dual = dual_factors(m.graph, primal);
            // The chain continues the instance stream, so the whole
            // realization is a function of inst_seed alone.
            SwpChain chain(m.graph, m.params);
            for (std::uint64_t s = 0; s < spec.swp.burn_in; ++s) chain.sweep(rng);
            const int ne = m.graph.edge_count();
            std::vector<double> p_hat(ne, 0.0);
            for (std::uint64_t s = 0; s < spec.swp.sweeps; ++s) {
              chain.sweep(rng);
              for (int k = 0; k < ne; ++k) p_hat[k] += chain.state().in_subset[k];
            }
            for (int k = 0; k < ne; ++k) {
              p_hat[k] /= static_cast<double>(spec.swp.sweeps);
            }
            estimate.resize(p_hat.size());
            for (std::size_t e = 0; e < p_hat.size(); ++e) {
              const std::vector<double> pi_d{1.0 - p_hat[e], p_hat[e]};
              estimate[e] =
                  map_edge_dual_to_primal(pi_d, primal.edge[e], dual.edge[e]);
            }
            break;
          }
        }
        for (int e = 0; e < m.graph.edge_count(); ++e) {
          errors[mi].push_back(relative_error(estimate[e], oracle.edge_marginals[e]));
        }
      }
    }
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const Stats s = pooled_stats(errors[mi]);
      records.push_back({sweep_value, spec.methods[mi], s.mean, s.median, s.stddev,
                         spec.realizations, spec.seed});
    }
  }
  return records;
}

void write_error_records(std::ostream& out, const std::vector<ErrorRecord>& records) {
  CsvWriter csv(out);
  csv.header({"sweep_value", "method", "mean_rel_error", "median_rel_error",
              "std_rel_error", "realizations", "seed"});
  for (const auto& r : records) {
    csv.field(r.sweep_value)
        .field(method_name(r.method))
        .field(r.mean)
        .field(r.median)
        .field(r.stddev)
        .field(r.realizations)
        .field(r.seed);
    csv.end_row();
  }
}

namespace {

using nlohmann::json;

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("experiment json parse error: ") + e.what());
  }
  try {
    ExperimentSpec spec;
    if (j.at("model").is_string()) {
      spec.model = load_model_input(j.at("model").get<std::string>());
    } else {
      spec.model = parse_model_input(j.at("model").dump());
    }
    for (const auto& m : j.at("methods")) {
      spec.methods.push_back(method_from_name(m.get<std::string>()));
    }
    const auto& sweep = j.at("sweep");
    const std::string var = sweep.at("variable").get<std::string>();
    if (var == "betaJ") {
      spec.sweep = SweepVariable::beta_j;
    } else if (var == "sigma2") {
      spec.sweep = SweepVariable::sigma2;
    } else if (var == "betaJx") {
      spec.sweep = SweepVariable::beta_j_x;
    } else {
      throw ValidationError("sweep variable must be betaJ, sigma2 or betaJx");
    }
    if (sweep.contains("grid")) {
      spec.grid = sweep.at("grid").get<std::vector<double>>();
    } else {
      spec.grid = uniform_grid(sweep.at("min").get<double>(),
                               sweep.at("max").get<double>(),
                               sweep.at("step").get<double>());
    }
    spec.realizations = j.value("realizations", 1);
    spec.seed = j.value("seed", std::uint64_t{1});
    spec.out_path = j.value("out", std::string{});
    if (j.contains("bp")) {
      const auto& b = j.at("bp");
      spec.bp.damping = b.value("damping", spec.bp.damping);
      spec.bp.tol = b.value("tol", spec.bp.tol);
      spec.bp.max_iter = b.value("max_iter", spec.bp.max_iter);
    }
    if (j.contains("swp")) {
      const auto& s = j.at("swp");
      spec.swp.sweeps = s.value("sweeps", spec.swp.sweeps);
      spec.swp.burn_in = s.value("burn_in", spec.swp.burn_in);
    }
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("experiment json: ") + e.what());
  }
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open experiment config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_spec(ss.str());
}

std::vector<double> uniform_grid(double min, double max, double step) {
  if (!(step > 0.0) || !(min <= max)) {
    throw ValidationError("grid needs step > 0 and min <= max");
  }
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double x = min + i * step;
    if (x > max + step * 1e-9) break;
    grid.push_back(x);
  }
  return grid;
}

void emit_curves(std::ostream& out, CurveKind kind, const std::vector<double>& grid,
                 int q) {
  for (double x : grid) {
    if (!(x > 0.0)) {
      throw ValidationError("curve grids must be strictly positive (betaJ > 0)");
    }
  }
  CsvWriter csv(out);
  switch (kind) {
    case CurveKind::fixedpoint_ising: {
      csv.header({"beta_j", "pi_star_0", "pi_star_1", "annotation"});
      for (double bj : grid) {
        const FixedPoint fp = ising_fixed_point(bj);
        csv.field(bj).field(fp.vector[0]).field(fp.vector[1]).field("");
        csv.end_row();
      }
      const double bjc = critical_coupling(ModelKind::ising);
      const FixedPoint fp = ising_fixed_point(bjc);
      csv.field(bjc).field(fp.vector[0]).field(fp.vector[1]).field("critical");
      csv.end_row();
      break;
    }
    case CurveKind::fixedpoint_potts: {
      csv.header({"q", "beta_j", "pi_star_0", "pi_star_1", "annotation"});
      for (double bj : grid) {
        const FixedPoint fp = potts_fixed_point(bj, q);
        csv.field(q).field(bj).field(fp.vector[0]).field(fp.vector[1]).field("");
        csv.end_row();
      }
      const double bjc = critical_coupling(ModelKind::potts, q);
      const FixedPoint fp = potts_fixed_point(bjc, q);
      csv.field(q).field(bjc).field(fp.vector[0]).field(fp.vector[1]).field("critical");
      csv.end_row();
      break;
    }
    case CurveKind::bounds: {
      csv.header({"beta_j", "primal_lower_bound", "dual_lower_bound", "annotation"});
      for (double bj : grid) {
        const IsingBounds b = ising_bounds(bj);
        csv.field(bj).field(b.primal_zero).field(b.dual_zero).field("");
        csv.end_row();
      }
      const double bjc = critical_coupling(ModelKind::ising);
      const IsingBounds b = ising_bounds(bjc);
      csv.field(bjc).field(b.primal_zero).field(b.dual_zero).field("critical");
      csv.end_row();
      break;
    }
  }
}

}  // namespace dualmarg
