#pragma once

#include <cstddef>
#include <span>

#include "fdgmaa/linalg.hpp"
#include "fdgmaa/problem.hpp"

namespace fdgmaa {

/// Maximizer x of <w, x> - f_i(x), the conjugate value d_i(w) and its
/// gradient. By Danskin's theorem grad == x.
struct DualOracleResult {
  Vector x;
  double value = 0.0;
  Vector grad;
  std::size_t inner_iters = 0;
};

inline constexpr double kDefaultOracleTol = 1e-10;

/// Solves max_x <w, x> - l_i(x) over the node's ball by projected gradient
/// ascent with step 1 / problem.smoothness(), starting from `warm_start`
/// (ball center when empty), until the gradient-mapping norm is <= tol.
/// Requires lambda > 0. Throws NoConvergence after 1e5 inner iterations.
DualOracleResult dual_oracle(const LocalProblem& problem, std::span<const double> w, double tol,
                             std::span<const double> warm_start = {});

}  // namespace fdgmaa
