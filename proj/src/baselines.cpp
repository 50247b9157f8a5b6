#include "fdgmaa/baselines.hpp"

#include <algorithm>
#include <vector>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

PrimalState dps_iteration(const PrimalState& state, const WeightedEdges& edges,
                          const ProblemInstance& instance, double c, std::size_t k,
                          Execution exec) {
  if (k == 0) throw InvalidArgument("dps_iteration: iteration counter starts at 1");
  if (!(c >= 0.0)) throw InvalidArgument("dps_iteration: step constant must be nonnegative");
  const std::size_t n = state.x.rows();
  if (instance.locals.size() != n) throw InvalidArgument("dps_iteration: node count mismatch");

  struct Neighbor {
    std::size_t j;
    double h;
  };
  std::vector<std::vector<Neighbor>> neighbors(n);
  for (const auto& e : edges) {
    neighbors[e.i].push_back({e.j, e.h});
    neighbors[e.j].push_back({e.i, e.h});
  }
  const double step = c / static_cast<double>(k);

  PrimalState next{state.x, state.iteration + 1};
  for_each_index(exec, n, [&](std::size_t i) {
    auto& list = neighbors[i];
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.j < b.j; });
    double total = 0.0;
    for (const auto& nb : list) total += nb.h;
    const auto xi = state.x.row(i);
    Vector mixed(xi.begin(), xi.end());
    for (auto& v : mixed) v *= 1.0 - total;
    for (const auto& nb : list) axpy(nb.h, state.x.row(nb.j), mixed);
    if (step != 0.0) axpy(-step, grad_smooth(instance.locals[i], xi), mixed);
    const auto& local = instance.locals[i];
    const Vector projected = project_ball(local.ball_center(), local.ball_radius(), mixed);
    std::copy(projected.begin(), projected.end(), next.x.row(i).begin());
  });
  return next;
}

DenseMatrix mixing_matrix(std::size_t n, const WeightedEdges& edges) {
  DenseMatrix a = DenseMatrix::identity(n);
  for (const auto& e : edges) {
    a(e.i, e.j) += e.h;
    a(e.j, e.i) += e.h;
    a(e.i, e.i) -= e.h;
    a(e.j, e.j) -= e.h;
  }
  return a;
}

}  // namespace fdgmaa
