#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdgmaa/linalg.hpp"
#include "fdgmaa/network.hpp"
#include "fdgmaa/parallel.hpp"

namespace fdgmaa {

/// Stacked dual iterates, row i = w_i. Feasible iff the rows sum to zero.
struct DualState {
  DenseMatrix w;
  std::size_t iteration = 0;
};

/// Pair of half-step iterates produced for one edge {i, j}.
struct EdgeHalf {
  Vector w_ij;
  Vector w_ji;
};

/// w_ij = w_i - beta (grad_i - grad_j), w_ji = w_j + beta (grad_i - grad_j).
/// The displacement is computed once and applied with opposite signs.
EdgeHalf edge_gradient_step(std::span<const double> w_i, std::span<const double> w_j,
                            std::span<const double> grad_i, std::span<const double> grad_j,
                            double beta);

struct Contribution {
  double h = 0.0;
  std::span<const double> half;
};

/// (1 - sum h) w_i + sum h half, accumulated in the given order.
Vector aggregate(std::span<const double> w_i, std::span<const Contribution> contributions);

/// Applies aggregate() to every node. halves[e] belongs to edges[e]; each
/// node sums its contributions in increasing neighbor order. Nodes without
/// edges keep their iterate.
DenseMatrix aggregate_all(const DenseMatrix& w, const WeightedEdges& edges,
                          std::span<const EdgeHalf> halves, Execution exec);

/// One FDGM iteration in edge-decomposed form. grads row i = grad d_i(w_i).
DualState fdgm_iteration(const DualState& state, const WeightedEdges& edges,
                         const DenseMatrix& grads, double beta,
                         Execution exec = Execution::serial);

/// Sum of the rows of w.
Vector row_sum(const DenseMatrix& w);

}  // namespace fdgmaa
