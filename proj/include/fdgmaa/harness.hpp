#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdgmaa/anderson.hpp"
#include "fdgmaa/linalg.hpp"
#include "fdgmaa/network.hpp"
#include "fdgmaa/parallel.hpp"
#include "fdgmaa/problem.hpp"

namespace fdgmaa {

enum class Algorithm { fdgm, fdgm_aa, dps };

std::string to_string(Algorithm a);
std::string to_string(SafeguardMode m);

/// Extra-edge probability used for the random base graph of every experiment.
inline constexpr double kBaseGraphEdgeProb = 0.1;
/// Gradient-mapping tolerance of the centralized reference solve.
inline constexpr double kReferenceTol = 1e-13;

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t n = 30;
  std::size_t d = 20;
  std::size_t samples_per_node = 20;
  double lambda = 0.01;
  std::size_t period = 5;
  std::size_t memory = 40;
  /// Defaults to 0.9 / L = 0.9 lambda.
  std::optional<double> beta;
  std::optional<double> c1;
  std::optional<double> c2;
  SafeguardMode safeguard_mode = SafeguardMode::simple;
  std::vector<Algorithm> algorithms{Algorithm::fdgm, Algorithm::fdgm_aa, Algorithm::dps};
  std::size_t iters = 2000;
  double oracle_tol = 1e-10;
  /// Constant c of the c/k step of the projected subgradient baseline.
  double dps_step = 1.0;
  std::string output_path = "out";

  double lipschitz() const { return 1.0 / lambda; }
  double step_size() const { return beta.value_or(0.9 / lipschitz()); }
  SafeguardParams safeguard() const;

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
};

/// One line of the convergence trace. Empty optionals are written as empty
/// CSV fields (not applicable to the algorithm or to this row).
struct MetricsRow {
  std::size_t iter = 0;
  std::optional<double> dual_value;
  std::optional<double> dual_gap;
  double primal_error = 0.0;
  double func_gap = 0.0;
  double consensus_violation = 0.0;
  std::optional<double> conservation_residual;
  std::optional<double> accept_rate;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// Dual gradients of both endpoints of an active edge at iteration k.
struct EdgeRecord {
  std::size_t k = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  double h = 0.0;
  Vector grad_i;
  Vector grad_j;
};

struct CertificateStats {
  std::size_t checked = 0;
  std::size_t failed = 0;
  /// Smallest (rhs - lhs + slack) seen; negative means a failure.
  double worst_margin = 0.0;
};

struct RunOptions {
  Execution exec = Execution::parallel;
  /// Re-evaluate the dual at every half-step and check the pairwise descent
  /// certificate.
  bool audit_certificates = true;
  /// Throw CertificateViolation on the first failed certificate or
  /// conservation check instead of counting it.
  bool strict = true;
  bool record_edges = false;
  bool record_iterates = false;
};

struct RunResult {
  Algorithm algorithm = Algorithm::fdgm;
  std::vector<MetricsRow> rows;
  std::vector<EdgeRecord> edges;
  /// Stacked iterates w^k (dual methods) or x^k (baseline), when recorded.
  std::vector<DenseMatrix> iterates;
  CertificateStats certificate;
  std::size_t conservation_failures = 0;
  std::size_t coefficient_fallbacks = 0;
  std::size_t oracle_inner_iters = 0;
};

/// Instance (with reference solution filled in) and schedule of a config.
struct Experiment {
  ExperimentConfig config;
  ProblemInstance instance;
  GraphSchedule schedule;
};

/// Generates the instance and schedule for a config and solves the
/// centralized reference problem.
Experiment prepare_experiment(const ExperimentConfig& config);

/// Seed of the schedule generator derived from the experiment seed.
std::uint64_t schedule_seed(std::uint64_t seed);

/// FDGM-AA: dual oracles, per-edge memory update and accelerated edge update,
/// aggregation; one MetricsRow per iterate w^0 .. w^iters.
/// Throws CertificateViolation (strict mode) when a pairwise certificate or
/// the conservation check fails.
RunResult run_fdgm_aa(const ExperimentConfig& config, const ProblemInstance& instance,
                      const GraphSchedule& schedule, const RunOptions& options = {});

/// Plain FDGM in edge-decomposed form, same metrics and audits.
RunResult run_fdgm(const ExperimentConfig& config, const ProblemInstance& instance,
                   const GraphSchedule& schedule, const RunOptions& options = {});

/// Distributed projected subgradient from the ball centers with step c/k.
RunResult run_dps(const ExperimentConfig& config, const ProblemInstance& instance,
                  const GraphSchedule& schedule, const RunOptions& options = {});

RunResult run_algorithm(Algorithm algorithm, const ExperimentConfig& config,
                        const ProblemInstance& instance, const GraphSchedule& schedule,
                        const RunOptions& options = {});

struct RateConstants {
  double lipschitz = 0.0;
  double beta = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double h_lower = 0.0;
  std::size_t period = 0;
  double eta_tilde = 0.0;
  double lambda_lower = 0.0;
  double tau = 0.0;
  /// Largest distance between observed iterates; a lower bound on R_0.
  double r0_estimate = 0.0;
};

/// tau = 3 B L^2 eta~ / theta2 + 3 / (h_ theta1). lambda_lower is the
/// smallest algebraic connectivity of the union graphs over one period of
/// window offsets. Throws NotConnected when a window union is disconnected.
RateConstants compute_rate_constants(const ExperimentConfig& config, const GraphSchedule& schedule,
                                     std::span<const DenseMatrix> iterates);

struct AuditReport {
  bool passed = true;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// Smallest rhs - lhs + slack over all checks.
  double worst_margin = 0.0;
};

/// Per-iteration check D(w^{k+1}) - D(w^k) <= -theta1 sum_e h ||g_i - g_j||^2
/// + slack, slack = 10 oracle_tol (1 + |D(w^k)| + |D(w^{k+1})|).
AuditReport audit_accumulated_descent(std::span<const MetricsRow> rows,
                                      std::span<const EdgeRecord> edges, double theta1,
                                      double oracle_tol);

/// dual_value(k+1) <= dual_value(k) + 10 oracle_tol for all k.
AuditReport audit_monotone_dual(std::span<const MetricsRow> rows, double oracle_tol);

/// sqrt(n primal_error) <= sqrt(2 L max(dual_gap, 0)) + 1e-6 at every row.
AuditReport audit_primal_dual(std::span<const MetricsRow> rows, std::size_t n, double lipschitz);

/// conservation_residual <= 1e-9 (1 + max_i ||w_i||) is enforced during the
/// run; this replays the count.
AuditReport audit_conservation(const RunResult& result);

inline const char* kCsvHeader =
    "iter,dual_value,dual_gap,primal_error,func_gap,consensus_violation,"
    "conservation_residual,accept_rate";

/// Writes the header and one line per row with 17 significant digits. Throws
/// IoError when the file cannot be written.
void write_csv(std::span<const MetricsRow> rows, const std::string& path);

/// Parses a file written by write_csv. Throws IoError on malformed input.
std::vector<MetricsRow> read_csv(const std::string& path);

}  // namespace fdgmaa
