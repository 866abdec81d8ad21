#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dualmarg/model.hpp"

namespace dualmarg {

// Coupling / field specifications from the model JSON file:
//   constant number, per-element array, or (couplings only) a seeded random
//   spec {"kind":"halfnormal","sigma2":s,"seed":n} /
//   {"kind":"uniform","min":a,"max":b,"seed":n}.
struct HalfNormalSpec {
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
};
struct UniformSpec {
  double min = 0.0;
  double max = 1.0;
  std::uint64_t seed = 0;
};
using CouplingSpec =
    std::variant<double, std::vector<double>, HalfNormalSpec, UniformSpec>;
using FieldSpec = std::variant<double, std::vector<double>>;

struct ModelInput {
  GraphSpec graph;
  ModelKind kind = ModelKind::ising;
  int q = 2;
  CouplingSpec couplings = 0.0;
  FieldSpec fields = 0.0;
};

// Parses the model JSON object:
// {"graph": {"kind":"grid","rows":r,"cols":c,"periodic":b} |
//           {"kind":"complete","n":n} |
//           {"kind":"edges","vertex_count":n,"edges":[[i,j],...]},
//  "model": "ising"|"potts", "q": q,
//  "couplings": <spec>, "fields": <spec>}
// Malformed input throws ValidationError.
ModelInput parse_model_input(const std::string& json_text);
ModelInput load_model_input(const std::string& path);

// Builds the concrete model, drawing random couplings with their embedded
// seed (or seed_override when given).
Model instantiate(const ModelInput& input,
                  std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace dualmarg
