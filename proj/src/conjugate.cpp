#include "fdgmaa/conjugate.hpp"

#include <cmath>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

DualOracleResult dual_oracle(const LocalProblem& problem, std::span<const double> w, double tol,
                             std::span<const double> warm_start) {
  const std::size_t d = problem.dim();
  if (w.size() != d) throw InvalidArgument("dual_oracle: dimension mismatch");
  if (!(tol > 0.0)) throw InvalidArgument("dual_oracle: tol must be positive");
  if (!(problem.mu() > 0.0)) throw InvalidArgument("dual_oracle: needs a strongly convex f_i");

  const auto& center = problem.ball_center();
  const double radius = problem.ball_radius();
  const double step = 1.0 / problem.smoothness();

  Vector x;
  if (warm_start.size() == d) {
    x = project_ball(center, radius, warm_start);
  } else {
    x = center;
  }

  const auto& a = problem.features();
  const auto& b = problem.labels();
  const double lambda = problem.lambda();
  const double scale = problem.scale();
  const double r2 = radius * radius;

  constexpr std::size_t kMaxInner = 100000;
  Vector g(d);
  Vector next(d);
  for (std::size_t it = 0; it < kMaxInner; ++it) {
    // Gradient of l_i(x) - <w, x>, written out to keep the loop allocation-free.
    for (std::size_t k = 0; k < d; ++k) g[k] = lambda * x[k] - w[k];
    for (std::size_t j = 0; j < a.rows(); ++j) {
      const auto row = a.row(j);
      const double margin = b[j] * dot(row, x);
      // -b sigmoid(-margin), evaluated without overflow.
      const double e = std::exp(-std::abs(margin));
      const double s = margin >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
      const double coef = -scale * b[j] * s;
      for (std::size_t k = 0; k < d; ++k) g[k] += coef * row[k];
    }
    double dist2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      next[k] = x[k] - step * g[k];
      const double off = next[k] - center[k];
      dist2 += off * off;
    }
    if (dist2 > r2) {
      const double f = radius / std::sqrt(dist2);
      for (std::size_t k = 0; k < d; ++k) next[k] = center[k] + f * (next[k] - center[k]);
    }
    const double mapping = std::sqrt(squared_distance(x, next)) / step;
    if (mapping <= tol) {
      DualOracleResult out;
      out.value = dot(w, x) - eval_smooth(problem, x);
      out.grad = x;
      out.x = std::move(x);
      out.inner_iters = it;
      return out;
    }
    std::swap(x, next);
  }
  throw NoConvergence("dual_oracle: inner iteration cap reached");
}

}  // namespace fdgmaa
