#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fdgmaa/linalg.hpp"

namespace fdgmaa {

/// Objective value returned outside the ball; compares greater than every
/// finite objective.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// One node's objective
///
///   l_i(x) = scale * sum_j log(1 + exp(-b_ij a_ij^T x)) + (lambda/2) ||x||^2
///
/// restricted to the ball ||x - p_i|| <= r_i. The ridge term is the only
/// source of strong convexity, so mu() == lambda().
class LocalProblem {
 public:
  /// Throws InvalidArgument on shape mismatch, labels outside {-1, +1},
  /// negative lambda or scale, or a nonpositive radius.
  LocalProblem(DenseMatrix features, Vector labels, double lambda, double scale,
               Vector ball_center, double ball_radius);

  const DenseMatrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  double lambda() const { return lambda_; }
  double scale() const { return scale_; }
  const Vector& ball_center() const { return ball_center_; }
  double ball_radius() const { return ball_radius_; }
  double mu() const { return lambda_; }
  std::size_t dim() const { return ball_center_.size(); }
  std::size_t samples() const { return labels_.size(); }

  /// Lipschitz bound of the smooth gradient: lambda + scale ||A||_2^2 / 4.
  double smoothness() const { return smoothness_; }

  friend bool operator==(const LocalProblem&, const LocalProblem&) = default;

 private:
  DenseMatrix features_;
  Vector labels_;
  double lambda_;
  double scale_;
  Vector ball_center_;
  double ball_radius_;
  double smoothness_ = 0.0;
};

struct ProblemInstance {
  std::vector<LocalProblem> locals;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t samples_per_node = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::optional<Vector> reference_solution;
  std::optional<double> reference_value;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Benchmark instance: first d-1 feature entries ~ Normal(2, var 8), last
/// entry 1, M/2 labels of each sign per node, ball centers ~ Normal(0, var
/// 0.01) per coordinate, radii 1 + |Normal(0, var 0.1)|, scale 1/(nM).
/// Throws InvalidArgument for nonpositive sizes, odd M, nonpositive lambda,
/// or when the origin is not strictly interior to every ball.
ProblemInstance generate_instance(std::uint64_t seed, std::size_t n, std::size_t d,
                                  std::size_t samples_per_node, double lambda);

/// Returns l_i(x) inside the ball (tolerance 1e-12 (1 + r_i)), else kInfeasible.
double eval_local(const LocalProblem& problem, std::span<const double> x);

/// Smooth part only; no ball check.
double eval_smooth(const LocalProblem& problem, std::span<const double> x);

/// Gradient of the smooth part.
Vector grad_smooth(const LocalProblem& problem, std::span<const double> x);

Vector project_ball(std::span<const double> center, double radius, std::span<const double> x);

/// Projection onto the intersection of all balls by Dykstra's alternating
/// projections. Stops when a full cycle moves the iterate by at most `tol`
/// and the worst ball violation is at most `tol`.
Vector project_intersection(const std::vector<LocalProblem>& locals, std::span<const double> x,
                            double tol, std::size_t max_cycles = 100000);

struct ReferenceSolution {
  Vector x;
  double value = 0.0;
  std::size_t iterations = 0;
  double mapping_norm = 0.0;
};

/// Minimizes sum_i l_i over the intersection of balls by projected gradient
/// (step 1 / sum_i smoothness_i) until the gradient-mapping norm is <= tol.
/// Throws NoConvergence after 1e6 iterations.
ReferenceSolution solve_reference(const ProblemInstance& instance, double tol);

/// Gradient-mapping norm ||x - P(x - t g)|| / t of the centralized problem.
double reference_mapping_norm(const ProblemInstance& instance, std::span<const double> x,
                              double inner_tol);

/// Sum of smooth objectives at a common point.
double total_objective(const ProblemInstance& instance, std::span<const double> x);

}  // namespace fdgmaa
