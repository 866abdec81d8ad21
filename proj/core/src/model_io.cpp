#include "dualmarg/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dualmarg/errors.hpp"
#include "dualmarg/rng.hpp"

namespace dualmarg {

namespace {

using nlohmann::json;

GraphSpec parse_graph_spec(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("model json: graph needs a \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "grid") {
    GridSpec s;
    s.rows = j.at("rows").get<int>();
    s.cols = j.at("cols").get<int>();
    s.periodic = j.value("periodic", false);
    return s;
  }
  if (kind == "complete") {
    CompleteSpec s;
    s.n = j.at("n").get<int>();
    return s;
  }
  if (kind == "edges") {
    EdgeListSpec s;
    s.vertex_count = j.at("vertex_count").get<int>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw ValidationError("model json: each edge must be a pair [i, j]");
      }
      s.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return s;
  }
  throw ValidationError("model json: unknown graph kind \"" + kind + "\"");
}

CouplingSpec parse_coupling_spec(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "halfnormal") {
      HalfNormalSpec s;
      s.sigma2 = j.at("sigma2").get<double>();
      s.seed = j.value("seed", std::uint64_t{0});
      if (!(s.sigma2 > 0.0)) throw ValidationError("halfnormal sigma2 must be > 0");
      return s;
    }
    if (kind == "uniform") {
      UniformSpec s;
      s.min = j.at("min").get<double>();
      s.max = j.at("max").get<double>();
      s.seed = j.value("seed", std::uint64_t{0});
      if (!(s.min < s.max)) throw ValidationError("uniform spec needs min < max");
      return s;
    }
    throw ValidationError("model json: unknown coupling spec kind \"" + kind + "\"");
  }
  throw ValidationError("model json: couplings must be a number, array, or spec object");
}

FieldSpec parse_field_spec(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array()) return j.get<std::vector<double>>();
  throw ValidationError("model json: fields must be a number or a per-vertex array");
}

}  // namespace

ModelInput parse_model_input(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model json parse error: ") + e.what());
  }
  try {
    ModelInput in;
    in.graph = parse_graph_spec(j.at("graph"));
    const std::string model = j.at("model").get<std::string>();
    if (model == "ising") {
      in.kind = ModelKind::ising;
    } else if (model == "potts") {
      in.kind = ModelKind::potts;
    } else {
      throw ValidationError("model json: model must be \"ising\" or \"potts\"");
    }
    in.q = j.value("q", in.kind == ModelKind::ising ? 2 : 3);
    if (j.contains("couplings")) in.couplings = parse_coupling_spec(j.at("couplings"));
    if (j.contains("fields")) in.fields = parse_field_spec(j.at("fields"));
    return in;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model json: ") + e.what());
  }
}

ModelInput load_model_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_input(ss.str());
}

Model instantiate(const ModelInput& input, std::optional<std::uint64_t> seed_override) {
  Model m;
  m.graph = build_graph(input.graph);
  m.kind = input.kind;
  m.params.q = input.q;
  if (m.kind == ModelKind::ising && input.q != 2) {
    throw ValidationError("ising mode requires q = 2");
  }

  const int ne = m.graph.edge_count();
  if (const double* c = std::get_if<double>(&input.couplings)) {
    m.params.couplings.assign(ne, *c);
  } else if (const auto* v = std::get_if<std::vector<double>>(&input.couplings)) {
    if (static_cast<int>(v->size()) != ne) {
      throw ValidationError("couplings array length does not match edge count");
    }
    m.params.couplings = *v;
  } else if (const auto* hn = std::get_if<HalfNormalSpec>(&input.couplings)) {
    CounterRng rng(seed_override.value_or(hn->seed));
    m.params.couplings.resize(ne);
    const double sigma = std::sqrt(hn->sigma2);
    for (double& x : m.params.couplings) x = rng.half_normal(sigma);
  } else {
    const auto& u = std::get<UniformSpec>(input.couplings);
    CounterRng rng(seed_override.value_or(u.seed));
    m.params.couplings.resize(ne);
    for (double& x : m.params.couplings) x = rng.uniform(u.min, u.max);
  }

  if (const double* f = std::get_if<double>(&input.fields)) {
    m.params.fields.assign(m.graph.vertex_count, *f);
  } else {
    const auto& v = std::get<std::vector<double>>(input.fields);
    if (static_cast<int>(v.size()) != m.graph.vertex_count) {
      throw ValidationError("fields array length does not match vertex count");
    }
    m.params.fields = v;
  }
  return m;
}

}  // namespace dualmarg
