#include <algorithm>
#include <cmath>
#include <limits>

#include "fdgmaa/errors.hpp"
#include "fdgmaa/harness.hpp"

namespace fdgmaa {

RateConstants compute_rate_constants(const ExperimentConfig& config, const GraphSchedule& schedule,
                                     std::span<const DenseMatrix> iterates) {
  const std::size_t b = schedule.period();
  if (!verify_b_connectivity(schedule, b)) {
    throw NotConnected("compute_rate_constants: schedule is not B-connected");
  }
  const SafeguardParams params = config.safeguard();

  RateConstants c;
  c.lipschitz = params.lipschitz;
  c.beta = params.beta;
  c.theta1 = params.theta1();
  c.theta2 = params.theta2();
  c.period = b;

  c.h_lower = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < b; ++k) {
    for (const auto& e : edges_at(schedule, k)) c.h_lower = std::min(c.h_lower, e.h);
  }

  // With B equal to the period every window starting at a multiple of B is
  // the union of all slots.
  const auto deg = degrees(schedule.n(), union_edges(schedule, 0, b));
  c.eta_tilde = static_cast<double>(*std::max_element(deg.begin(), deg.end()));

  c.lambda_lower = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < b; ++k) {
    c.lambda_lower =
        std::min(c.lambda_lower, smallest_nonzero_laplacian_eig(union_laplacian(schedule, k, b)));
  }

  const double bl = static_cast<double>(b);
  c.tau = 3.0 * bl * c.lipschitz * c.lipschitz * c.eta_tilde / c.theta2 +
          3.0 / (c.h_lower * c.theta1);

  for (std::size_t s = 0; s < iterates.size(); ++s) {
    for (std::size_t t = s + 1; t < iterates.size(); ++t) {
      c.r0_estimate = std::max(c.r0_estimate, squared_distance(iterates[s].entries(),
                                                               iterates[t].entries()));
    }
  }
  c.r0_estimate = std::sqrt(c.r0_estimate);
  return c;
}

}  // namespace fdgmaa
