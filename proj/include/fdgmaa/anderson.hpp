#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fdgmaa/fdgm.hpp"
#include "fdgmaa/linalg.hpp"

namespace fdgmaa {

/// Anderson memory shared by the two endpoints of one undirected edge {i, j}
/// (i is the smaller node index). Holds the iterates and dual gradients of
/// both endpoints at the most recent iterations in which the edge was active.
class PairMemory {
 public:
  PairMemory(std::size_t capacity, std::size_t dim);

  /// Appends the entry for iteration k, evicting the oldest entry when the
  /// capacity is exceeded. Throws InvalidArgument unless k is larger than
  /// every stored index.
  void update(std::size_t k, std::span<const double> w_i, std::span<const double> grad_i,
              std::span<const double> w_j, std::span<const double> grad_j);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return entries_.empty(); }
  std::vector<std::size_t> indices() const;

  /// d x |I| matrices whose columns are the stored vectors, oldest first.
  DenseMatrix iterates_i() const;
  DenseMatrix iterates_j() const;
  DenseMatrix grads_i() const;
  DenseMatrix grads_j() const;

  /// Column t (oldest first) of each stacked matrix.
  std::span<const double> iterate_i(std::size_t t) const { return entries_[t].w_i; }
  std::span<const double> iterate_j(std::size_t t) const { return entries_[t].w_j; }
  std::span<const double> grad_i(std::size_t t) const { return entries_[t].grad_i; }
  std::span<const double> grad_j(std::size_t t) const { return entries_[t].grad_j; }

 private:
  struct Entry {
    std::size_t k;
    Vector w_i;
    Vector grad_i;
    Vector w_j;
    Vector grad_j;
  };
  DenseMatrix stack(Vector Entry::*field) const;

  std::size_t capacity_;
  std::size_t dim_;
  std::deque<Entry> entries_;
};

/// Safe-guard constants. theta1 = min(beta (1 - beta L), c1) and
/// theta2 = min((1/beta - L)/2, c2) are the guaranteed descent constants.
struct SafeguardParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double lipschitz = 0.0;
  double beta = 0.0;

  /// c1 / c2 default to beta (1 - beta L) and (1/beta - L)/2, making the
  /// safe-guard exactly as strict as the fallback step's descent guarantee.
  /// Throws InvalidArgument unless 0 < beta < 1/L and c1, c2 > 0.
  static SafeguardParams make(double lipschitz, double beta, std::optional<double> c1 = {},
                              std::optional<double> c2 = {});

  double theta1() const;
  double theta2() const;
};

enum class SafeguardMode { simple, exact };

inline constexpr double kDefaultRelativeRidge = 1e-10;

struct Coefficients {
  Vector alpha_ij;
  Vector alpha_ji;
  bool fallback_used = false;
};

/// Solves
///   min ||D_i a - D_j b||^2  s.t.  W_i a + W_j b = w_i + w_j, 1^T a = 1, 1^T b = 1
/// over the stacked unknown (a, b), with ridge relative_ridge * trace(M^T M)/p
/// added to the objective. The last memory entry must be the current
/// iteration, so the unit vector on it is always feasible; that point is
/// returned (fallback_used = true) when the solve fails.
Coefficients solve_coefficients(const PairMemory& mem, std::span<const double> w_i,
                                std::span<const double> w_j,
                                double relative_ridge = kDefaultRelativeRidge);

/// Extrapolated candidate: w~ = W a (per endpoint), moved onto the
/// sum-preserving line w~_ij + w~_ji = w_i^k + w_j^k (the last memory entry),
/// then stepped along the approximate gradient gap g = D_i a - D_j b:
/// w-_ij = w~_ij - beta g, w-_ji = w~_ji + beta g.
EdgeHalf aa_candidate_step(const PairMemory& mem, std::span<const double> alpha_ij,
                           std::span<const double> alpha_ji, double beta);

/// Local state of one edge at iteration k, shared by the safe-guards and the
/// descent certificate.
struct EdgeInputs {
  std::span<const double> w_i;
  std::span<const double> w_j;
  std::span<const double> grad_i;
  std::span<const double> grad_j;
  double value_i = 0.0;
  double value_j = 0.0;
};

/// Right-hand side min{-a ||grad_i - grad_j||^2, -b (||u - w_i||^2 + ||v - w_j||^2)}.
double descent_threshold(const EdgeInputs& in, std::span<const double> u,
                         std::span<const double> v, double a, double b);

/// Quadratic-upper-bound test: linearization plus (L/2)||move||^2 per
/// endpoint must not exceed the threshold with constants (c1, c2).
bool safeguard_simple(const EdgeInputs& in, std::span<const double> w_bar_ij,
                      std::span<const double> w_bar_ji, const SafeguardParams& params);

/// Exact test on dual values: d_i(w-_ij) + d_j(w-_ji) - d_i(w_i) - d_j(w_j)
/// must not exceed the threshold with constants (c1, c2).
bool safeguard_exact(const EdgeInputs& in, double value_bar_ij, double value_bar_ji,
                     std::span<const double> w_bar_ij, std::span<const double> w_bar_ji,
                     const SafeguardParams& params);

/// Dual value and gradient at an arbitrary point.
struct DualPoint {
  double value = 0.0;
  Vector grad;
};
using DualEvaluator = std::function<DualPoint(std::span<const double>)>;

struct EdgeUpdate {
  EdgeHalf half;
  bool accepted = false;
  bool coefficient_fallback = false;
  /// Dual values at the returned half-steps, when they were evaluated.
  std::optional<double> value_ij;
  std::optional<double> value_ji;
};

struct AndersonOptions {
  SafeguardMode mode = SafeguardMode::simple;
  double relative_ridge = kDefaultRelativeRidge;
};

/// One accelerated edge update. `mem` must already contain iteration k.
/// Computes the coefficients and the candidate, evaluates the selected
/// safe-guard and returns either the candidate or the plain gradient step.
/// Exact mode calls eval_i / eval_j at the candidate points. With a single
/// memory entry the candidate coincides with the plain step bit for bit.
EdgeUpdate edge_update(const PairMemory& mem, const EdgeInputs& in, const SafeguardParams& params,
                       const AndersonOptions& options = {}, const DualEvaluator& eval_i = {},
                       const DualEvaluator& eval_j = {});

/// Pairwise descent certificate with constants (theta1, theta2):
/// returns rhs - lhs + slack, nonnegative iff the certificate holds.
double descent_certificate_margin(const EdgeInputs& in, const EdgeHalf& half, double value_ij,
                                  double value_ji, const SafeguardParams& params, double slack);

bool check_descent_certificate(const EdgeInputs& in, const EdgeHalf& half, double value_ij,
                               double value_ji, const SafeguardParams& params, double slack);

/// Classic Anderson step for a fixed-point map T. history holds (x^t, T(x^t))
/// pairs, oldest first. Uses the last min(m + 1, |history|) entries (m
/// residual differences), minimizes ||sum a_t r^t|| with sum a_t = 1, and
/// returns sum a_t T(x^t).
struct ClassicAaStep {
  Vector next;
  Vector alpha;
};
ClassicAaStep classic_aa_step(std::span<const std::pair<Vector, Vector>> history, std::size_t m,
                              double ridge = 0.0);

}  // namespace fdgmaa
