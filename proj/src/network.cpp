#include "fdgmaa/network.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

GraphSchedule::GraphSchedule(std::size_t n, std::vector<std::vector<Edge>> slots,
                             WeightRule rule)
    : n_(n), slots_(std::move(slots)), rule_(rule) {
  if (n_ == 0) throw InvalidArgument("GraphSchedule: need at least one node");
  if (slots_.empty()) throw InvalidArgument("GraphSchedule: need at least one slot");
  for (auto& slot : slots_) {
    for (auto& e : slot) {
      if (e.i >= n_ || e.j >= n_) throw InvalidArgument("GraphSchedule: endpoint out of range");
      if (e.i == e.j) throw InvalidArgument("GraphSchedule: self-loop");
      if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(slot.begin(), slot.end());
    slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
  }
}

GraphSchedule generate_periodic_schedule(std::uint64_t seed, std::size_t n, std::size_t period,
                                         double extra_edge_prob) {
  if (n < 2) throw InvalidArgument("generate_periodic_schedule: need n >= 2");
  if (period < 1) throw InvalidArgument("generate_periodic_schedule: need period >= 1");
  if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0)) {
    throw InvalidArgument("generate_periodic_schedule: probability outside [0, 1]");
  }
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    const std::size_t a = order[k];
    const std::size_t b = order[pick(rng)];
    edges.push_back({std::min(a, b), std::max(a, b)});
    present[a][b] = present[b][a] = true;
  }
  std::bernoulli_distribution extra(extra_edge_prob);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (present[i][j]) continue;
      if (extra(rng)) edges.push_back({i, j});
    }
  }
  if (period > edges.size()) {
    throw InvalidParams("generate_periodic_schedule: period exceeds the base-graph edge count");
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<std::vector<Edge>> slots(period);
  for (std::size_t e = 0; e < edges.size(); ++e) slots[e % period].push_back(edges[e]);
  return GraphSchedule(n, std::move(slots));
}

std::vector<std::size_t> degrees(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : edges) {
    ++deg[e.i];
    ++deg[e.j];
  }
  return deg;
}

WeightedEdges edges_at(const GraphSchedule& schedule, std::size_t k) {
  const auto& slot = schedule.slot(k);
  const auto deg = degrees(schedule.n(), slot);
  WeightedEdges out;
  out.reserve(slot.size());
  for (const auto& e : slot) {
    const double h = 1.0 / static_cast<double>(std::max(deg[e.i], deg[e.j]));
    out.push_back({e.i, e.j, h});
  }
  return out;
}

bool is_connected(std::size_t n, const std::vector<Edge>& edges) {
  DisjointSets sets(n);
  std::size_t components = n;
  for (const auto& e : edges) {
    if (sets.unite(e.i, e.j)) --components;
  }
  return components == 1;
}

std::vector<Edge> union_edges(const GraphSchedule& schedule, std::size_t k, std::size_t b) {
  std::vector<Edge> all;
  for (std::size_t t = k; t < k + b; ++t) {
    const auto& slot = schedule.slot(t);
    all.insert(all.end(), slot.begin(), slot.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

bool verify_b_connectivity(const GraphSchedule& schedule, std::size_t b) {
  if (b == 0) return false;
  for (std::size_t k = 0; k < schedule.period(); ++k) {
    if (!is_connected(schedule.n(), union_edges(schedule, k, b))) return false;
  }
  return true;
}

DenseMatrix union_laplacian(const GraphSchedule& schedule, std::size_t k, std::size_t b) {
  DenseMatrix lap(schedule.n(), schedule.n());
  for (const auto& e : union_edges(schedule, k, b)) {
    lap(e.i, e.i) += 1.0;
    lap(e.j, e.j) += 1.0;
    lap(e.i, e.j) -= 1.0;
    lap(e.j, e.i) -= 1.0;
  }
  return lap;
}

}  // namespace fdgmaa
