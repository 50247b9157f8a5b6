#include <cmath>
#include <string>

#include "fdgmaa/errors.hpp"
#include "fdgmaa/harness.hpp"

namespace fdgmaa {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::fdgm: return "fdgm";
    case Algorithm::fdgm_aa: return "fdgm_aa";
    case Algorithm::dps: return "dps";
  }
  return "unknown";
}

std::string to_string(SafeguardMode m) {
  return m == SafeguardMode::simple ? "simple" : "exact";
}

SafeguardParams ExperimentConfig::safeguard() const {
  return SafeguardParams::make(lipschitz(), step_size(), c1, c2);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (n < 2) fail("n must be at least 2");
  if (d < 1) fail("d must be at least 1");
  if (samples_per_node < 2 || samples_per_node % 2 != 0) {
    fail("samples_per_node must be a positive even number");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
  if (period < 1) fail("period must be at least 1");
  if (memory < 1) fail("memory must be at least 1");
  if (iters < 1) fail("iters must be at least 1");
  const double b = step_size();
  if (!(b > 0.0 && b < lambda)) fail("beta must lie in (0, lambda)");
  if (c1 && !(*c1 > 0.0)) fail("c1 must be positive");
  if (c2 && !(*c2 > 0.0)) fail("c2 must be positive");
  if (algorithms.empty()) fail("algorithms must not be empty");
  if (!(oracle_tol > 0.0)) fail("oracle_tol must be positive");
  if (!(dps_step >= 0.0) || !std::isfinite(dps_step)) fail("dps_step must be nonnegative");
  if (output_path.empty()) fail("output_path must not be empty");
}

}  // namespace fdgmaa
