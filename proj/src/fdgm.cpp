#include "fdgmaa/fdgm.hpp"

#include <algorithm>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

EdgeHalf edge_gradient_step(std::span<const double> w_i, std::span<const double> w_j,
                            std::span<const double> grad_i, std::span<const double> grad_j,
                            double beta) {
  const std::size_t d = w_i.size();
  EdgeHalf out{Vector(d), Vector(d)};
  for (std::size_t k = 0; k < d; ++k) {
    const double step = beta * (grad_i[k] - grad_j[k]);
    out.w_ij[k] = w_i[k] - step;
    out.w_ji[k] = w_j[k] + step;
  }
  return out;
}

Vector aggregate(std::span<const double> w_i, std::span<const Contribution> contributions) {
  double total = 0.0;
  for (const auto& c : contributions) total += c.h;
  Vector out(w_i.begin(), w_i.end());
  if (contributions.empty()) return out;
  const double keep = 1.0 - total;
  for (auto& v : out) v *= keep;
  for (const auto& c : contributions) axpy(c.h, c.half, out);
  return out;
}

DenseMatrix aggregate_all(const DenseMatrix& w, const WeightedEdges& edges,
                          std::span<const EdgeHalf> halves, Execution exec) {
  if (halves.size() != edges.size()) {
    throw InvalidArgument("aggregate_all: one half-step pair per edge required");
  }
  const std::size_t n = w.rows();
  struct Incident {
    std::size_t neighbor;
    double h;
    const Vector* half;
  };
  std::vector<std::vector<Incident>> incident(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    incident[edge.i].push_back({edge.j, edge.h, &halves[e].w_ij});
    incident[edge.j].push_back({edge.i, edge.h, &halves[e].w_ji});
  }
  DenseMatrix next = w;
  for_each_index(exec, n, [&](std::size_t i) {
    auto& list = incident[i];
    if (list.empty()) return;
    std::sort(list.begin(), list.end(),
              [](const Incident& a, const Incident& b) { return a.neighbor < b.neighbor; });
    std::vector<Contribution> contributions;
    contributions.reserve(list.size());
    for (const auto& inc : list) contributions.push_back({inc.h, *inc.half});
    const Vector updated = aggregate(w.row(i), contributions);
    std::copy(updated.begin(), updated.end(), next.row(i).begin());
  });
  return next;
}

DualState fdgm_iteration(const DualState& state, const WeightedEdges& edges,
                         const DenseMatrix& grads, double beta, Execution exec) {
  std::vector<EdgeHalf> halves(edges.size());
  for_each_index(exec, edges.size(), [&](std::size_t e) {
    const auto& edge = edges[e];
    halves[e] = edge_gradient_step(state.w.row(edge.i), state.w.row(edge.j),
                                   grads.row(edge.i), grads.row(edge.j), beta);
  });
  return {aggregate_all(state.w, edges, halves, exec), state.iteration + 1};
}

Vector row_sum(const DenseMatrix& w) {
  Vector s(w.cols(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i) axpy(1.0, w.row(i), s);
  return s;
}

}  // namespace fdgmaa
