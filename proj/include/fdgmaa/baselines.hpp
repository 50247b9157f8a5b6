#pragma once

#include <cstddef>

#include "fdgmaa/linalg.hpp"
#include "fdgmaa/network.hpp"
#include "fdgmaa/parallel.hpp"
#include "fdgmaa/problem.hpp"

namespace fdgmaa {

/// Stacked primal iterates of the projected subgradient baseline.
struct PrimalState {
  DenseMatrix x;
  std::size_t iteration = 0;
};

/// x_i <- P_i( sum_j a_ij x_j - (c/k) grad l_i(x_i) ) with Metropolis mixing
/// a_ij = h_ij, a_ii = 1 - sum_j h_ij, and P_i the projection onto node i's
/// own ball. Neighbor terms are summed in increasing neighbor order.
/// Throws InvalidArgument when k == 0 or c < 0.
PrimalState dps_iteration(const PrimalState& state, const WeightedEdges& edges,
                          const ProblemInstance& instance, double c, std::size_t k,
                          Execution exec = Execution::serial);

/// Dense n x n mixing matrix of the baseline for one edge set.
DenseMatrix mixing_matrix(std::size_t n, const WeightedEdges& edges);

}  // namespace fdgmaa
