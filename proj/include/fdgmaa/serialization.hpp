#pragma once

#include <string>

#include "json.hpp"

#include "fdgmaa/harness.hpp"
#include "fdgmaa/network.hpp"
#include "fdgmaa/problem.hpp"

namespace fdgmaa {

using Json = nlohmann::json;

Algorithm parse_algorithm(const std::string& name);
SafeguardMode parse_safeguard_mode(const std::string& name);

// Doubles are written with round-trip precision, so from_json(to_json(x)) == x.
Json instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const Json& j);

Json schedule_to_json(const GraphSchedule& schedule);
GraphSchedule schedule_from_json(const Json& j);

/// Unknown keys, wrong types and out-of-range values raise ConfigError.
/// Missing keys keep their defaults.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);

Json rate_constants_to_json(const RateConstants& c);

/// Throws IoError when the file is missing or is not valid JSON.
Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace fdgmaa
