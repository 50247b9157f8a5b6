#include "fdgmaa/serialization.hpp"

#include <fstream>
#include <set>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "fdgm") return Algorithm::fdgm;
  if (name == "fdgm_aa") return Algorithm::fdgm_aa;
  if (name == "dps") return Algorithm::dps;
  throw ConfigError("unknown algorithm '" + name + "'");
}

SafeguardMode parse_safeguard_mode(const std::string& name) {
  if (name == "simple") return SafeguardMode::simple;
  if (name == "exact") return SafeguardMode::exact;
  throw ConfigError("unknown safeguard_mode '" + name + "'");
}

Json instance_to_json(const ProblemInstance& instance) {
  Json nodes = Json::array();
  for (const auto& p : instance.locals) {
    nodes.push_back({{"features", p.features().entries()},
                     {"labels", p.labels()},
                     {"ball_center", p.ball_center()},
                     {"ball_radius", p.ball_radius()},
                     {"scale", p.scale()}});
  }
  Json j = {{"n", instance.n},
            {"d", instance.d},
            {"M", instance.samples_per_node},
            {"lambda", instance.lambda},
            {"seed", instance.seed},
            {"nodes", std::move(nodes)}};
  if (instance.reference_solution) j["reference_solution"] = *instance.reference_solution;
  if (instance.reference_value) j["reference_value"] = *instance.reference_value;
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  try {
    ProblemInstance inst;
    inst.n = j.at("n").get<std::size_t>();
    inst.d = j.at("d").get<std::size_t>();
    inst.samples_per_node = j.at("M").get<std::size_t>();
    inst.lambda = j.at("lambda").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    const auto& nodes = j.at("nodes");
    if (nodes.size() != inst.n) throw InvalidArgument("instance: node count does not match n");
    for (const auto& node : nodes) {
      auto labels = node.at("labels").get<Vector>();
      const std::size_t rows = labels.size();
      DenseMatrix features(rows, inst.d, node.at("features").get<Vector>());
      inst.locals.emplace_back(std::move(features), std::move(labels), inst.lambda,
                               node.at("scale").get<double>(),
                               node.at("ball_center").get<Vector>(),
                               node.at("ball_radius").get<double>());
    }
    if (j.contains("reference_solution")) {
      inst.reference_solution = j.at("reference_solution").get<Vector>();
    }
    if (j.contains("reference_value")) inst.reference_value = j.at("reference_value").get<double>();
    return inst;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("instance: ") + e.what());
  }
}

Json schedule_to_json(const GraphSchedule& schedule) {
  Json slots = Json::array();
  for (const auto& slot : schedule.slots()) {
    Json edges = Json::array();
    for (const auto& e : slot) edges.push_back({e.i, e.j});
    slots.push_back(std::move(edges));
  }
  return {{"n", schedule.n()},
          {"period", schedule.period()},
          {"weight_rule", "metropolis"},
          {"slots", std::move(slots)}};
}

GraphSchedule schedule_from_json(const Json& j) {
  try {
    if (j.at("weight_rule").get<std::string>() != "metropolis") {
      throw InvalidArgument("schedule: only the metropolis weight rule is supported");
    }
    std::vector<std::vector<Edge>> slots;
    for (const auto& slot : j.at("slots")) {
      std::vector<Edge> edges;
      for (const auto& e : slot) edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
      slots.push_back(std::move(edges));
    }
    if (slots.size() != j.at("period").get<std::size_t>()) {
      throw InvalidArgument("schedule: slot count does not match period");
    }
    return GraphSchedule(j.at("n").get<std::size_t>(), std::move(slots));
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("schedule: ") + e.what());
  }
}

namespace {

template <class T>
T get_field(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

std::optional<double> get_optional(const Json& j, const char* key) {
  if (j.at(key).is_null()) return std::nullopt;
  return get_field<double>(j, key);
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "seed",   "n",       "d",      "samples_per_node", "lambda",     "period",
      "memory", "beta",    "c1",     "c2",               "safeguard_mode", "algorithms",
      "iters",  "oracle_tol", "dps_step", "output_path"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  // Negative numbers would wrap when read as unsigned.
  auto count = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_unsigned()) {
      throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
    }
    field = get_field<std::remove_reference_t<decltype(field)>>(j, key);
  };
  count("seed", c.seed);
  count("n", c.n);
  count("d", c.d);
  count("samples_per_node", c.samples_per_node);
  count("period", c.period);
  count("memory", c.memory);
  count("iters", c.iters);
  if (j.contains("lambda")) c.lambda = get_field<double>(j, "lambda");
  if (j.contains("beta")) c.beta = get_optional(j, "beta");
  if (j.contains("c1")) c.c1 = get_optional(j, "c1");
  if (j.contains("c2")) c.c2 = get_optional(j, "c2");
  if (j.contains("safeguard_mode")) {
    c.safeguard_mode = parse_safeguard_mode(get_field<std::string>(j, "safeguard_mode"));
  }
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& name : get_field<std::vector<std::string>>(j, "algorithms")) {
      const Algorithm a = parse_algorithm(name);
      for (Algorithm seen : c.algorithms) {
        if (seen == a) throw ConfigError("config: duplicate algorithm '" + name + "'");
      }
      c.algorithms.push_back(a);
    }
  }
  if (j.contains("oracle_tol")) c.oracle_tol = get_field<double>(j, "oracle_tol");
  if (j.contains("dps_step")) c.dps_step = get_field<double>(j, "dps_step");
  if (j.contains("output_path")) c.output_path = get_field<std::string>(j, "output_path");
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json algorithms = Json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(to_string(a));
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"seed", c.seed},
          {"n", c.n},
          {"d", c.d},
          {"samples_per_node", c.samples_per_node},
          {"lambda", c.lambda},
          {"period", c.period},
          {"memory", c.memory},
          {"beta", opt(c.beta)},
          {"c1", opt(c.c1)},
          {"c2", opt(c.c2)},
          {"safeguard_mode", to_string(c.safeguard_mode)},
          {"algorithms", std::move(algorithms)},
          {"iters", c.iters},
          {"oracle_tol", c.oracle_tol},
          {"dps_step", c.dps_step},
          {"output_path", c.output_path}};
}

Json rate_constants_to_json(const RateConstants& c) {
  return {{"L", c.lipschitz},           {"beta", c.beta},
          {"theta1", c.theta1},         {"theta2", c.theta2},
          {"h_lower", c.h_lower},       {"B", c.period},
          {"eta_tilde", c.eta_tilde},   {"lambda_lower", c.lambda_lower},
          {"tau", c.tau},               {"R0_estimate", c.r0_estimate}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace fdgmaa
