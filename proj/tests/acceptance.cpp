// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fdgmaa/anderson.hpp"
#include "fdgmaa/conjugate.hpp"
#include "fdgmaa/fdgm.hpp"
#include "fdgmaa/harness.hpp"
#include "oracles.hpp"

using namespace fdgmaa;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Timed {
  RunResult result;
  double seconds = 0.0;
};

Timed timed_run(Algorithm a, const ExperimentConfig& c, const Experiment& ex, RunOptions opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{run_algorithm(a, c, ex.instance, ex.schedule, opts), 0.0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

RunOptions lenient(bool record_edges = false) {
  RunOptions o;
  o.strict = false;
  o.record_edges = record_edges;
  return o;
}

// Runs on the benchmark configuration shared by several criteria.
struct BenchmarkRuns {
  ExperimentConfig config;
  Experiment ex;
  Timed fdgm;
  Timed aa;
};

BenchmarkRuns benchmark_runs() {
  ExperimentConfig c;
  Experiment ex = prepare_experiment(c);
  Timed f = timed_run(Algorithm::fdgm, c, ex, lenient(true));
  Timed a = timed_run(Algorithm::fdgm_aa, c, ex, lenient(true));
  return {c, std::move(ex), std::move(f), std::move(a)};
}

Verdict conservation(const BenchmarkRuns& b) {
  double worst = 0.0;
  bool ok = true;
  for (const Timed* t : {&b.fdgm, &b.aa}) {
    const AuditReport r = audit_conservation(t->result);
    ok = ok && r.passed && t->result.rows.size() == b.config.iters + 1 && t->seconds < 120.0;
    for (const auto& row : t->result.rows) worst = std::max(worst, *row.conservation_residual);
  }
  return {ok, "max residual " + fmt("%.2e", worst) + ", runtimes " + fmt("%.1fs", b.fdgm.seconds) +
                  " / " + fmt("%.1fs", b.aa.seconds)};
}

Verdict primal_dual(const BenchmarkRuns& b) {
  const AuditReport f = audit_primal_dual(b.fdgm.result.rows, b.config.n, b.config.lipschitz());
  const AuditReport a = audit_primal_dual(b.aa.result.rows, b.config.n, b.config.lipschitz());
  return {f.passed && a.passed, std::to_string(f.checked + a.checked) + " rows, " +
                                    std::to_string(f.failures + a.failures) +
                                    " violations, worst margin " +
                                    fmt("%.2e", std::min(f.worst_margin, a.worst_margin))};
}

Verdict accumulated_descent(const BenchmarkRuns& b) {
  const std::size_t horizon = 500;
  const double theta1 = b.config.safeguard().theta1();
  bool ok = true;
  std::size_t checked = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const Timed* t : {&b.fdgm, &b.aa}) {
    const auto& rows = t->result.rows;
    std::vector<EdgeRecord> edges;
    for (const auto& e : t->result.edges) {
      if (e.k < horizon) edges.push_back(e);
    }
    const AuditReport r = audit_accumulated_descent(
        std::span(rows).first(horizon + 1), edges, theta1, b.config.oracle_tol);
    ok = ok && r.passed;
    checked += r.checked;
    worst = std::min(worst, r.worst_margin);
  }
  return {ok, std::to_string(checked) + " iterations checked, worst margin " + fmt("%.2e", worst)};
}

Verdict collapse(const BenchmarkRuns& b) {
  ExperimentConfig c = b.config;
  c.memory = 1;
  c.iters = 500;
  const RunResult aa = run_fdgm_aa(c, b.ex.instance, b.ex.schedule, lenient());
  double worst = 0.0;
  for (std::size_t k = 0; k <= c.iters; ++k) {
    worst = std::max(worst,
                     std::abs(*aa.rows[k].dual_value - *b.fdgm.result.rows[k].dual_value));
  }
  return {worst <= 1e-12, "max dual-value difference " + fmt("%.2e", worst) + " over 500 iterations"};
}

Verdict test_matrix(bool certificates) {
  static std::vector<std::string> lines;
  static bool monotone_ok = true;
  static bool cert_ok = true;
  static std::size_t runs = 0;
  static std::size_t edge_updates = 0;
  static double worst_mono = std::numeric_limits<double>::infinity();
  static double worst_cert = std::numeric_limits<double>::infinity();
  if (runs == 0) {
    for (std::size_t period : {1, 5, 20}) {
      for (double lambda : {0.01, 0.1}) {
        ExperimentConfig c;
        c.period = period;
        c.lambda = lambda;
        c.iters = 300;
        const Experiment ex = prepare_experiment(c);
        std::vector<std::pair<Algorithm, std::size_t>> jobs{{Algorithm::fdgm, 1}};
        for (std::size_t m : {1, 5, 40}) jobs.emplace_back(Algorithm::fdgm_aa, m);
        for (const auto& [a, m] : jobs) {
          c.memory = m;
          const RunResult r = run_algorithm(a, c, ex.instance, ex.schedule, lenient());
          const AuditReport mono = audit_monotone_dual(r.rows, c.oracle_tol);
          monotone_ok = monotone_ok && mono.passed;
          cert_ok = cert_ok && r.certificate.failed == 0 && r.certificate.checked > 0;
          worst_mono = std::min(worst_mono, mono.worst_margin);
          worst_cert = std::min(worst_cert, r.certificate.worst_margin);
          edge_updates += r.certificate.checked;
          ++runs;
        }
      }
    }
  }
  if (!certificates) {
    return {monotone_ok, std::to_string(runs) + " runs of 300 iterations, worst margin " +
                             fmt("%.2e", worst_mono)};
  }
  return {cert_ok, std::to_string(edge_updates) + " edge updates, worst margin " +
                       fmt("%.2e", worst_cert)};
}

Verdict matrix_form() {
  const ProblemInstance inst = generate_instance(11, 5, 4, 6, 0.1);
  const GraphSchedule s = generate_periodic_schedule(11, 5, 2, 0.3);
  const double beta = 0.9 * 0.1;
  const double tol = 1e-13;
  auto grads_at = [&](const DenseMatrix& w) {
    DenseMatrix g(5, 4);
    for (std::size_t i = 0; i < 5; ++i) {
      const Vector x = dual_oracle(inst.locals[i], w.row(i), tol).grad;
      for (std::size_t k = 0; k < 4; ++k) g(i, k) = x[k];
    }
    return g;
  };
  DualState edge{DenseMatrix(5, 4), 0};
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(5, 4);
  double worst = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    const WeightedEdges edges = edges_at(s, k);
    edge = fdgm_iteration(edge, edges, grads_at(edge.w), beta);
    const Eigen::MatrixXd g = oracle::to_eigen(grads_at(oracle::from_eigen(mat)));
    mat = (mat - beta * oracle::h_matrix(5, edges) * g).eval();
    worst = std::max(worst, (oracle::to_eigen(edge.w) - mat).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-10, "max deviation " + fmt("%.2e", worst) + " over 100 iterations"};
}

// Exact-test lhs without cancellation: d(w + u) - d(w) = g^T u + u^T Q u / 2.
double quadratic_increment(const oracle::QuadraticDual& q, const Vector& g, const Vector& from,
                           const Vector& to) {
  const Eigen::VectorXd u = oracle::to_eigen(subtract(to, from));
  return oracle::to_eigen(g).dot(u) + 0.5 * u.dot(q.q_mat * u);
}

Verdict safeguard_implication() {
  std::mt19937_64 rng(2024);
  const double eps = std::numeric_limits<double>::epsilon();
  std::size_t sampled = 0;
  std::size_t accepted = 0;
  std::size_t resolvable = 0;
  std::size_t counterexamples = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 5);
    const auto di = oracle::random_quadratic(rng, d, 0.05, 1.0);
    const auto dj = oracle::random_quadratic(rng, d, 0.05, 1.0);
    const double l = std::max(di.lipschitz(), dj.lipschitz());
    const double beta = 0.9 / l;
    const SafeguardParams p = SafeguardParams::make(l, beta, 1e-6, 1e-6);
    Vector wi = oracle::random_vector(rng, d);
    Vector wj = wi;
    for (double& v : wj) v = -v;
    PairMemory mem(1 + static_cast<std::size_t>(trial % 8), d);
    for (std::size_t k = 0; k < 12; ++k) {
      const Vector gi = di.grad(wi);
      const Vector gj = dj.grad(wj);
      mem.update(k, wi, gi, wj, gj);
      const EdgeInputs in{wi, wj, gi, gj, di.value(wi), dj.value(wj)};
      const Coefficients c = solve_coefficients(mem, wi, wj);
      const EdgeHalf cand = aa_candidate_step(mem, c.alpha_ij, c.alpha_ji, beta);
      ++sampled;
      const bool simple = safeguard_simple(in, cand.w_ij, cand.w_ji, p);
      if (simple) {
        ++accepted;
        const double threshold = descent_threshold(in, cand.w_ij, cand.w_ji, p.c1, p.c2);
        const double closed = quadratic_increment(di, gi, wi, cand.w_ij) +
                              quadratic_increment(dj, gj, wj, cand.w_ji);
        bool holds = closed <= threshold + 1e-12 * (std::abs(closed) + std::abs(threshold));
        // Differences of dual values only resolve thresholds above their rounding error.
        const double vij = di.value(cand.w_ij);
        const double vji = dj.value(cand.w_ji);
        const double noise = 16 * eps * (std::abs(vij) + std::abs(vji) + std::abs(in.value_i) +
                                         std::abs(in.value_j));
        if (-threshold > noise) {
          ++resolvable;
          holds = holds && safeguard_exact(in, vij, vji, cand.w_ij, cand.w_ji, p);
        }
        counterexamples += !holds;
      }
      const EdgeHalf next = simple ? cand : edge_gradient_step(wi, wj, gi, gj, beta);
      wi = next.w_ij;
      wj = next.w_ji;
    }
  }
  return {sampled >= 1000 && counterexamples == 0,
          std::to_string(sampled) + " candidates, " + std::to_string(accepted) +
              " accepted by the quadratic bound (" + std::to_string(resolvable) +
              " also checked on dual values), " + std::to_string(counterexamples) +
              " counterexamples"};
}

Verdict krylov() {
  std::mt19937_64 rng(8);
  const std::size_t d = 5;
  Eigen::MatrixXd g(d, d);
  std::normal_distribution<double> nd;
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = nd(rng);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd eig(d);
  eig << 0.9, -0.7, 0.5, 0.3, -0.1;
  const Eigen::MatrixXd t = q * eig.asDiagonal() * q.transpose();
  const Eigen::VectorXd b = oracle::to_eigen(oracle::random_vector(rng, d));
  const Eigen::VectorXd star = (Eigen::MatrixXd::Identity(d, d) - t).lu().solve(b);
  auto apply = [&](const Vector& x) {
    return oracle::from_eigen(Eigen::VectorXd(t * oracle::to_eigen(x) + b));
  };
  auto solve = [&](bool accelerate) {
    std::vector<std::pair<Vector, Vector>> history;
    Vector x(d, 0.0);
    for (std::size_t k = 0; k < 1000; ++k) {
      if ((oracle::to_eigen(x) - star).norm() <= 1e-8) return k;
      history.emplace_back(x, apply(x));
      x = accelerate ? classic_aa_step(history, 5).next : history.back().second;
    }
    return std::size_t{1000};
  };
  const std::size_t aa = solve(true);
  const std::size_t plain = solve(false);
  return {aa <= d + 2 && plain > 50, "Anderson " + std::to_string(aa) + " iterations, plain " +
                                         std::to_string(plain)};
}

// Parameters picked by the sweeps recorded with the project notes.
struct Setting {
  std::size_t period;
  double lambda;
  double oracle_tol;
  double dps_step;
  bool require_tenfold;
};

Verdict reproduction() {
  const std::vector<Setting> settings{
      {5, 0.01, 1e-10, 30.0, true}, {20, 0.01, 1e-10, 3.0, false}, {5, 0.1, 1e-13, 10.0, false}};
  bool ok = true;
  std::string detail;
  for (const auto& s : settings) {
    ExperimentConfig c;
    c.period = s.period;
    c.lambda = s.lambda;
    c.oracle_tol = s.oracle_tol;
    c.beta = 0.99 * s.lambda;
    c.dps_step = s.dps_step;
    c.safeguard_mode = SafeguardMode::exact;
    c.c1 = 1e-6;
    c.c2 = 1e-6;
    const Experiment ex = prepare_experiment(c);
    const Timed f = timed_run(Algorithm::fdgm, c, ex, lenient());
    const Timed a = timed_run(Algorithm::fdgm_aa, c, ex, lenient());
    const Timed p = timed_run(Algorithm::dps, c, ex, lenient());
    const double ef = f.result.rows.back().primal_error;
    const double ea = a.result.rows.back().primal_error;
    const double ep = p.result.rows.back().primal_error;
    bool here = ea < ef && ef < ep;
    if (s.require_tenfold) here = here && 10.0 * ea <= ef;
    here = here && f.seconds < 120.0 && a.seconds < 120.0 && p.seconds < 120.0;
    here = here && a.result.certificate.failed == 0;
    ok = ok && here;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%sB=%zu/lambda=%g: aa %.2e, fdgm %.2e, dps %.2e (%.0fs/%.0fs)%s",
                  detail.empty() ? "" : "; ", s.period, s.lambda, ea, ef, ep, a.seconds,
                  f.seconds, here ? "" : " FAILED");
    detail += buf;
  }
  return {ok, detail};
}

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& check) {
    if (!only.empty() && !only.contains(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, name,
                v.detail.c_str(), s);
    std::fflush(stdout);
    all = all && v.pass;
  };

  std::optional<BenchmarkRuns> bench;
  auto runs = [&]() -> const BenchmarkRuns& {
    if (!bench) bench = benchmark_runs();
    return *bench;
  };
  report(1, "conservation", [&] { return conservation(runs()); });
  report(2, "monotone dual descent", [] { return test_matrix(false); });
  report(3, "pairwise descent certificate", [] { return test_matrix(true); });
  report(4, "accumulated descent", [&] { return accumulated_descent(runs()); });
  report(5, "memory-one collapse", [&] { return collapse(runs()); });
  report(6, "matrix-form equivalence", matrix_form);
  report(7, "safe-guard implication", safeguard_implication);
  report(8, "classic Anderson exactness", krylov);
  report(9, "ordering after tuning", reproduction);
  report(10, "primal-dual inequality", [&] { return primal_dual(runs()); });
  return all ? 0 : 1;
}
