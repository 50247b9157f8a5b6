#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fdgmaa/linalg.hpp"

namespace fdgmaa {

/// Undirected edge stored with i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class WeightRule { metropolis };

/// Cyclic sequence of edge sets: slot k mod period is active at iteration k.
/// Construction normalizes every edge to i < j, removes duplicates and sorts
/// each slot. Connectivity is not enforced here; see verify_b_connectivity.
class GraphSchedule {
 public:
  /// Throws InvalidArgument for n < 1, an empty slot list, out-of-range
  /// endpoints or self-loops.
  GraphSchedule(std::size_t n, std::vector<std::vector<Edge>> slots,
                WeightRule rule = WeightRule::metropolis);

  std::size_t n() const { return n_; }
  std::size_t period() const { return slots_.size(); }
  WeightRule weight_rule() const { return rule_; }
  const std::vector<std::vector<Edge>>& slots() const { return slots_; }
  const std::vector<Edge>& slot(std::size_t k) const { return slots_[k % slots_.size()]; }

  friend bool operator==(const GraphSchedule&, const GraphSchedule&) = default;

 private:
  std::size_t n_;
  std::vector<std::vector<Edge>> slots_;
  WeightRule rule_;
};

struct WeightedEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double h = 0.0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};
using WeightedEdges = std::vector<WeightedEdge>;

/// Random connected base graph (random recursive spanning tree plus every
/// other pair with probability extra_edge_prob) whose shuffled edges are dealt
/// round-robin into `period` nonempty slots. Throws InvalidArgument for
/// n < 2, period < 1, or period larger than the base-graph edge count.
GraphSchedule generate_periodic_schedule(std::uint64_t seed, std::size_t n, std::size_t period,
                                         double extra_edge_prob);

/// Active edges at iteration k with Metropolis weights
/// h_ij = 1 / max(deg_i, deg_j) computed on the slot graph.
WeightedEdges edges_at(const GraphSchedule& schedule, std::size_t k);

/// True iff the union of every window of b consecutive slots is connected.
/// Checks one window per start offset in [0, period).
bool verify_b_connectivity(const GraphSchedule& schedule, std::size_t b);

/// Sorted, deduplicated edges of the union graph over [k, k + b - 1].
std::vector<Edge> union_edges(const GraphSchedule& schedule, std::size_t k, std::size_t b);

/// Unweighted Laplacian of the union graph over [k, k + b - 1].
DenseMatrix union_laplacian(const GraphSchedule& schedule, std::size_t k, std::size_t b);

/// Degree of every node in an edge list.
std::vector<std::size_t> degrees(std::size_t n, const std::vector<Edge>& edges);

/// True iff the edge list connects all n nodes (union-find).
bool is_connected(std::size_t n, const std::vector<Edge>& edges);

}  // namespace fdgmaa
