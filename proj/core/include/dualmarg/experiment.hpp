#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dualmarg/exact.hpp"
#include "dualmarg/model_io.hpp"

namespace dualmarg {

enum class Method { exact, bp_primal, bp_dual_map, swp_map };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// What the sweep grid ranges over: a homogeneous coupling, the variance of
// half-normal couplings, or the upper end of uniform [0.05, x] couplings.
enum class SweepVariable { beta_j, sigma2, beta_j_x };

struct BpSettings {
  double damping = 0.5;
  double tol = 1e-9;
  int max_iter = 10000;
};

struct SwpSettings {
  std::uint64_t sweeps = 100000;
  std::uint64_t burn_in = 1000;
};

struct ExperimentSpec {
  ModelInput model;
  std::vector<Method> methods;
  SweepVariable sweep = SweepVariable::beta_j;
  std::vector<double> grid;  // strictly increasing
  int realizations = 1;
  std::uint64_t seed = 1;
  std::string out_path;  // optional; CLI --out overrides
  BpSettings bp;
  SwpSettings swp;
};

// One aggregate per (grid point, method): relative errors of the estimated
// pi_p,e(0) against the enumeration oracle, pooled over all
// (edge, realization) pairs of that grid point.
struct ErrorRecord {
  double sweep_value = 0.0;
  Method method = Method::exact;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;  // sample std of the pooled errors
  int realizations = 0;
  std::uint64_t seed = 0;
};

// |est(0) - exact(0)| / exact(0); requires exact(0) > 0.
double relative_error(std::span<const double> estimate, std::span<const double> exact);

// Runs the sweep. Realization r of grid point gi draws its couplings from
// CounterRng(seed + gi*realizations + r); the same stream then feeds the SWP
// chain, so a fixed spec reproduces byte-identical output. The oracle
// feasibility (q^N within budget) is checked before any work.
std::vector<ErrorRecord> run_experiment(const ExperimentSpec& spec,
                                        const EnumerationOptions& opts = {});

void write_error_records(std::ostream& out, const std::vector<ErrorRecord>& records);

// Parses the experiment config JSON (see README for the schema).
ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

enum class CurveKind { fixedpoint_ising, fixedpoint_potts, bounds };

// Closed-form curves for the fixed-point and bound figures, one row per grid
// point plus annotated rows marking the critical coupling. Grid points must
// be positive.
void emit_curves(std::ostream& out, CurveKind kind, const std::vector<double>& grid,
                 int q = 2);

// Convenience: uniform grid [min, max] with the given step.
std::vector<double> uniform_grid(double min, double max, double step);

}  // namespace dualmarg
