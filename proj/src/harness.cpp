#include "fdgmaa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "fdgmaa/baselines.hpp"
#include "fdgmaa/conjugate.hpp"
#include "fdgmaa/errors.hpp"
#include "fdgmaa/fdgm.hpp"

namespace fdgmaa {

std::uint64_t schedule_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

Experiment prepare_experiment(const ExperimentConfig& config) {
  config.validate();
  ProblemInstance instance =
      generate_instance(config.seed, config.n, config.d, config.samples_per_node, config.lambda);
  const ReferenceSolution ref = solve_reference(instance, kReferenceTol);
  instance.reference_solution = ref.x;
  instance.reference_value = ref.value;
  GraphSchedule schedule = generate_periodic_schedule(schedule_seed(config.seed), config.n,
                                                      config.period, kBaseGraphEdgeProb);
  return {config, std::move(instance), std::move(schedule)};
}

namespace {

void check_inputs(const ExperimentConfig& config, const ProblemInstance& instance,
                  const GraphSchedule& schedule) {
  // iters == 0 is allowed here (initial row only); every other field must be valid.
  ExperimentConfig probe = config;
  probe.iters = std::max<std::size_t>(probe.iters, 1);
  probe.validate();
  if (instance.locals.size() != instance.n || schedule.n() != instance.n) {
    throw InvalidArgument("run: instance and schedule disagree on n");
  }
  if (!instance.reference_solution || !instance.reference_value) {
    throw InvalidArgument("run: instance has no reference solution");
  }
  if (instance.reference_solution->size() != instance.d) {
    throw InvalidArgument("run: reference solution has the wrong dimension");
  }
}

// Primal columns of a metrics row from the per-node points x_i.
void fill_primal(MetricsRow& row, const ProblemInstance& instance,
                 const std::vector<std::span<const double>>& x) {
  const std::size_t n = instance.n;
  const std::size_t d = instance.d;
  const Vector& xstar = *instance.reference_solution;
  Vector mean(d, 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err += squared_distance(x[i], xstar);
    axpy(1.0 / static_cast<double>(n), x[i], mean);
  }
  // Smooth part only: the average may sit marginally outside some ball.
  double value = 0.0;
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value += eval_smooth(instance.locals[i], mean);
    spread += squared_distance(x[i], mean);
  }
  row.primal_error = err / static_cast<double>(n);
  row.func_gap = std::abs(value - *instance.reference_value);
  row.consensus_violation = spread / static_cast<double>(n);
}

double max_row_norm(const DenseMatrix& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) m = std::max(m, norm(w.row(i)));
  return m;
}

std::string describe_violation(std::size_t k, const WeightedEdge& e, double margin) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "descent certificate failed at iteration " << k << " on edge (" << e.i << ", " << e.j
      << "), h = " << e.h << ", margin = " << margin;
  return msg.str();
}

RunResult run_dual(const ExperimentConfig& config, const ProblemInstance& instance,
                   const GraphSchedule& schedule, const RunOptions& options, bool accelerated) {
  check_inputs(config, instance, schedule);
  const std::size_t n = instance.n;
  const std::size_t d = instance.d;
  const double tol = config.oracle_tol;
  const double dstar = -*instance.reference_value;
  const SafeguardParams params = config.safeguard();
  const AndersonOptions aa_options{config.safeguard_mode, kDefaultRelativeRidge};

  RunResult result;
  result.algorithm = accelerated ? Algorithm::fdgm_aa : Algorithm::fdgm;
  result.certificate.worst_margin = std::numeric_limits<double>::infinity();

  DenseMatrix w(n, d, 0.0);
  std::vector<DualOracleResult> oracle(n);
  std::vector<char> stale(n, 1);
  std::map<Edge, PairMemory> memories;
  std::optional<double> accept_rate;

  for (std::size_t k = 0;; ++k) {
    // Only nodes touched by the last aggregation need a new oracle call.
    for_each_index(options.exec, n, [&](std::size_t i) {
      if (!stale[i]) return;
      DualOracleResult r = dual_oracle(instance.locals[i], w.row(i), tol, oracle[i].x);
      oracle[i] = std::move(r);
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (stale[i]) result.oracle_inner_iters += oracle[i].inner_iters;
    }

    MetricsRow row;
    row.iter = k;
    double dual = 0.0;
    std::vector<std::span<const double>> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      dual += oracle[i].value;
      x[i] = oracle[i].x;
    }
    row.dual_value = dual;
    row.dual_gap = dual - dstar;
    fill_primal(row, instance, x);
    const double residual = norm(row_sum(w));
    row.conservation_residual = residual;
    row.accept_rate = accept_rate;
    result.rows.push_back(row);
    if (options.record_iterates) result.iterates.push_back(w);

    if (!(residual <= 1e-9 * (1.0 + max_row_norm(w)))) {
      ++result.conservation_failures;
      if (options.strict) {
        throw CertificateViolation("conservation residual " + std::to_string(residual) +
                                   " at iteration " + std::to_string(k));
      }
    }
    if (k == config.iters) break;

    const WeightedEdges edges = edges_at(schedule, k);
    const std::size_t ne = edges.size();
    std::vector<EdgeHalf> halves(ne);
    std::vector<char> accepted(ne, 0);
    std::vector<char> fallback(ne, 0);
    std::vector<double> margins(ne, std::numeric_limits<double>::infinity());

    std::vector<PairMemory*> mems(ne, nullptr);
    if (accelerated) {
      for (std::size_t e = 0; e < ne; ++e) {
        auto it = memories.try_emplace(Edge{edges[e].i, edges[e].j}, config.memory, d).first;
        mems[e] = &it->second;
      }
    }

    for_each_index(options.exec, ne, [&](std::size_t e) {
      const std::size_t i = edges[e].i;
      const std::size_t j = edges[e].j;
      const EdgeInputs in{w.row(i),       w.row(j),       oracle[i].grad,
                          oracle[j].grad, oracle[i].value, oracle[j].value};
      auto evaluator = [&](std::size_t node) {
        return [&, node](std::span<const double> p) {
          DualOracleResult r = dual_oracle(instance.locals[node], p, tol, oracle[node].x);
          return DualPoint{r.value, std::move(r.grad)};
        };
      };
      std::optional<double> v_ij;
      std::optional<double> v_ji;
      if (accelerated) {
        mems[e]->update(k, w.row(i), oracle[i].grad, w.row(j), oracle[j].grad);
        EdgeUpdate u = edge_update(*mems[e], in, params, aa_options, evaluator(i), evaluator(j));
        halves[e] = std::move(u.half);
        accepted[e] = u.accepted;
        fallback[e] = u.coefficient_fallback;
        v_ij = u.value_ij;
        v_ji = u.value_ji;
      } else {
        halves[e] = edge_gradient_step(w.row(i), w.row(j), oracle[i].grad, oracle[j].grad,
                                       params.beta);
      }
      if (options.audit_certificates) {
        if (!v_ij) v_ij = evaluator(i)(halves[e].w_ij).value;
        if (!v_ji) v_ji = evaluator(j)(halves[e].w_ji).value;
        const double slack = 10.0 * tol *
                             (1.0 + std::abs(*v_ij) + std::abs(*v_ji) + std::abs(in.value_i) +
                              std::abs(in.value_j));
        margins[e] = descent_certificate_margin(in, halves[e], *v_ij, *v_ji, params, slack);
      }
    });

    std::size_t n_accepted = 0;
    for (std::size_t e = 0; e < ne; ++e) {
      n_accepted += accepted[e];
      result.coefficient_fallbacks += fallback[e];
      if (!options.audit_certificates) continue;
      ++result.certificate.checked;
      result.certificate.worst_margin = std::min(result.certificate.worst_margin, margins[e]);
      if (!(margins[e] >= 0.0)) {
        ++result.certificate.failed;
        if (options.strict) throw CertificateViolation(describe_violation(k, edges[e], margins[e]));
      }
    }
    if (accelerated && ne > 0) {
      accept_rate = static_cast<double>(n_accepted) / static_cast<double>(ne);
    } else {
      accept_rate.reset();
    }
    if (options.record_edges) {
      for (const auto& e : edges) {
        result.edges.push_back({k, e.i, e.j, e.h, oracle[e.i].grad, oracle[e.j].grad});
      }
    }

    w = aggregate_all(w, edges, halves, options.exec);
    std::fill(stale.begin(), stale.end(), 0);
    for (const auto& e : edges) stale[e.i] = stale[e.j] = 1;
  }
  if (result.certificate.checked == 0) result.certificate.worst_margin = 0.0;
  return result;
}

}  // namespace

RunResult run_fdgm_aa(const ExperimentConfig& config, const ProblemInstance& instance,
                      const GraphSchedule& schedule, const RunOptions& options) {
  return run_dual(config, instance, schedule, options, true);
}

RunResult run_fdgm(const ExperimentConfig& config, const ProblemInstance& instance,
                   const GraphSchedule& schedule, const RunOptions& options) {
  return run_dual(config, instance, schedule, options, false);
}

RunResult run_dps(const ExperimentConfig& config, const ProblemInstance& instance,
                  const GraphSchedule& schedule, const RunOptions& options) {
  check_inputs(config, instance, schedule);
  const std::size_t n = instance.n;
  RunResult result;
  result.algorithm = Algorithm::dps;

  PrimalState state{DenseMatrix(n, instance.d), 0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = instance.locals[i].ball_center();
    std::copy(c.begin(), c.end(), state.x.row(i).begin());
  }
  for (std::size_t k = 0;; ++k) {
    MetricsRow row;
    row.iter = k;
    std::vector<std::span<const double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = state.x.row(i);
    fill_primal(row, instance, x);
    result.rows.push_back(row);
    if (options.record_iterates) result.iterates.push_back(state.x);
    if (k == config.iters) break;
    state = dps_iteration(state, edges_at(schedule, k), instance, config.dps_step, k + 1,
                          options.exec);
  }
  return result;
}

RunResult run_algorithm(Algorithm algorithm, const ExperimentConfig& config,
                        const ProblemInstance& instance, const GraphSchedule& schedule,
                        const RunOptions& options) {
  switch (algorithm) {
    case Algorithm::fdgm: return run_fdgm(config, instance, schedule, options);
    case Algorithm::fdgm_aa: return run_fdgm_aa(config, instance, schedule, options);
    case Algorithm::dps: return run_dps(config, instance, schedule, options);
  }
  throw InvalidArgument("run_algorithm: unknown algorithm");
}

AuditReport audit_accumulated_descent(std::span<const MetricsRow> rows,
                                      std::span<const EdgeRecord> edges, double theta1,
                                      double oracle_tol) {
  std::map<std::size_t, double> decrease;
  for (const auto& e : edges) decrease[e.k] += e.h * squared_distance(e.grad_i, e.grad_j);

  AuditReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
    const auto& a = rows[r];
    const auto& b = rows[r + 1];
    if (!a.dual_value || !b.dual_value || b.iter != a.iter + 1) continue;
    const auto it = decrease.find(a.iter);
    const double rhs = -theta1 * (it == decrease.end() ? 0.0 : it->second);
    const double slack =
        10.0 * oracle_tol * (1.0 + std::abs(*a.dual_value) + std::abs(*b.dual_value));
    const double margin = rhs - (*b.dual_value - *a.dual_value) + slack;
    ++report.checked;
    report.worst_margin = std::min(report.worst_margin, margin);
    if (!(margin >= 0.0)) ++report.failures;
  }
  if (report.checked == 0) report.worst_margin = 0.0;
  report.passed = report.failures == 0;
  return report;
}

AuditReport audit_monotone_dual(std::span<const MetricsRow> rows, double oracle_tol) {
  AuditReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
    if (!rows[r].dual_value || !rows[r + 1].dual_value) continue;
    const double margin = *rows[r].dual_value + 10.0 * oracle_tol - *rows[r + 1].dual_value;
    ++report.checked;
    report.worst_margin = std::min(report.worst_margin, margin);
    if (!(margin >= 0.0)) ++report.failures;
  }
  if (report.checked == 0) report.worst_margin = 0.0;
  report.passed = report.failures == 0;
  return report;
}

AuditReport audit_primal_dual(std::span<const MetricsRow> rows, std::size_t n, double lipschitz) {
  AuditReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (!row.dual_gap) continue;
    const double lhs = std::sqrt(static_cast<double>(n) * row.primal_error);
    const double rhs = std::sqrt(2.0 * lipschitz * std::max(*row.dual_gap, 0.0)) + 1e-6;
    ++report.checked;
    report.worst_margin = std::min(report.worst_margin, rhs - lhs);
    if (!(lhs <= rhs)) ++report.failures;
  }
  if (report.checked == 0) report.worst_margin = 0.0;
  report.passed = report.failures == 0;
  return report;
}

AuditReport audit_conservation(const RunResult& result) {
  AuditReport report;
  for (const auto& row : result.rows) {
    if (row.conservation_residual) ++report.checked;
  }
  report.failures = result.conservation_failures;
  report.passed = report.failures == 0;
  return report;
}

}  // namespace fdgmaa
