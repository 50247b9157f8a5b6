#include "fdgmaa/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

LocalProblem::LocalProblem(DenseMatrix features, Vector labels, double lambda, double scale,
                           Vector ball_center, double ball_radius)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      lambda_(lambda),
      scale_(scale),
      ball_center_(std::move(ball_center)),
      ball_radius_(ball_radius) {
  if (features_.rows() != labels_.size()) {
    throw InvalidArgument("LocalProblem: one label per feature row required");
  }
  if (features_.rows() > 0 && features_.cols() != ball_center_.size()) {
    throw InvalidArgument("LocalProblem: feature width must equal the ball dimension");
  }
  if (ball_center_.empty()) throw InvalidArgument("LocalProblem: empty dimension");
  for (double b : labels_) {
    if (b != 1.0 && b != -1.0) throw InvalidArgument("LocalProblem: labels must be +1 or -1");
  }
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw InvalidArgument("LocalProblem: lambda must be finite and nonnegative");
  }
  if (!(scale_ >= 0.0) || !std::isfinite(scale_)) {
    throw InvalidArgument("LocalProblem: scale must be finite and nonnegative");
  }
  if (!(ball_radius_ > 0.0) || !std::isfinite(ball_radius_)) {
    throw InvalidArgument("LocalProblem: ball radius must be positive");
  }
  if (!features_.all_finite()) throw InvalidArgument("LocalProblem: non-finite feature");
  smoothness_ = lambda_;
  if (features_.rows() > 0) smoothness_ += scale_ * spectral_norm_squared(features_) / 4.0;
}

ProblemInstance generate_instance(std::uint64_t seed, std::size_t n, std::size_t d,
                                  std::size_t samples_per_node, double lambda) {
  if (n == 0 || d == 0 || samples_per_node == 0) {
    throw InvalidDims("generate_instance: sizes must be positive");
  }
  if (samples_per_node % 2 != 0) {
    throw InvalidDims("generate_instance: samples per node must be even");
  }
  if (!(lambda > 0.0)) throw InvalidArgument("generate_instance: lambda must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> feature_dist(2.0, std::sqrt(8.0));
  std::normal_distribution<double> center_dist(0.0, std::sqrt(0.01));
  std::normal_distribution<double> radius_dist(0.0, std::sqrt(0.1));

  const std::size_t m = samples_per_node;
  const double scale = 1.0 / static_cast<double>(n * m);

  ProblemInstance inst;
  inst.n = n;
  inst.d = d;
  inst.samples_per_node = m;
  inst.lambda = lambda;
  inst.seed = seed;
  inst.locals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DenseMatrix features(m, d);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c + 1 < d; ++c) features(r, c) = feature_dist(rng);
      features(r, d - 1) = 1.0;
    }
    Vector labels(m, 1.0);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(m / 2), labels.end(), -1.0);
    std::shuffle(labels.begin(), labels.end(), rng);

    Vector center(d);
    for (auto& v : center) v = center_dist(rng);
    const double radius = 1.0 + std::abs(radius_dist(rng));

    // The origin must be strictly interior to every ball.
    if (!(norm(center) < radius)) {
      throw InvalidArgument("generate_instance: origin is not interior to every ball");
    }
    inst.locals.emplace_back(std::move(features), std::move(labels), lambda, scale,
                             std::move(center), radius);
  }
  return inst;
}

double eval_smooth(const LocalProblem& problem, std::span<const double> x) {
  const auto& a = problem.features();
  const auto& b = problem.labels();
  double loss = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j) loss += softplus(-b[j] * dot(a.row(j), x));
  return problem.scale() * loss + 0.5 * problem.lambda() * squared_norm(x);
}

double eval_local(const LocalProblem& problem, std::span<const double> x) {
  const double r = problem.ball_radius();
  const double dist = std::sqrt(squared_distance(x, problem.ball_center()));
  if (!(dist <= r + 1e-12 * (1.0 + r))) return kInfeasible;
  return eval_smooth(problem, x);
}

Vector grad_smooth(const LocalProblem& problem, std::span<const double> x) {
  const auto& a = problem.features();
  const auto& b = problem.labels();
  Vector g(x.begin(), x.end());
  for (auto& v : g) v *= problem.lambda();
  for (std::size_t j = 0; j < a.rows(); ++j) {
    const double coef = -b[j] * sigmoid(-b[j] * dot(a.row(j), x));
    axpy(problem.scale() * coef, a.row(j), g);
  }
  return g;
}

Vector project_ball(std::span<const double> center, double radius, std::span<const double> x) {
  Vector out(x.begin(), x.end());
  const double dist = std::sqrt(squared_distance(x, center));
  if (dist <= radius) return out;
  const double f = radius / dist;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = center[k] + f * (x[k] - center[k]);
  return out;
}

Vector project_intersection(const std::vector<LocalProblem>& locals, std::span<const double> x,
                            double tol, std::size_t max_cycles) {
  const std::size_t nb = locals.size();
  const std::size_t d = x.size();
  Vector y(x.begin(), x.end());
  std::vector<Vector> increments(nb, Vector(d, 0.0));
  for (std::size_t cycle = 0; cycle < max_cycles; ++cycle) {
    const Vector start = y;
    for (std::size_t b = 0; b < nb; ++b) {
      Vector shifted = y;
      axpy(1.0, increments[b], shifted);
      Vector next = project_ball(locals[b].ball_center(), locals[b].ball_radius(), shifted);
      for (std::size_t k = 0; k < d; ++k) increments[b][k] = shifted[k] - next[k];
      y = std::move(next);
    }
    double violation = 0.0;
    for (const auto& p : locals) {
      const double dist = std::sqrt(squared_distance(y, p.ball_center()));
      violation = std::max(violation, dist - p.ball_radius());
    }
    if (std::sqrt(squared_distance(y, start)) <= tol && violation <= tol) return y;
  }
  throw NoConvergence("project_intersection: Dykstra cycle cap reached");
}

double total_objective(const ProblemInstance& instance, std::span<const double> x) {
  double s = 0.0;
  for (const auto& p : instance.locals) s += eval_smooth(p, x);
  return s;
}

namespace {

Vector total_gradient(const ProblemInstance& instance, std::span<const double> x) {
  Vector g(x.size(), 0.0);
  for (const auto& p : instance.locals) axpy(1.0, grad_smooth(p, x), g);
  return g;
}

double total_smoothness(const ProblemInstance& instance) {
  double s = 0.0;
  for (const auto& p : instance.locals) s += p.smoothness();
  return s;
}

}  // namespace

double reference_mapping_norm(const ProblemInstance& instance, std::span<const double> x,
                              double inner_tol) {
  const double t = 1.0 / total_smoothness(instance);
  Vector trial(x.begin(), x.end());
  axpy(-t, total_gradient(instance, x), trial);
  const Vector proj = project_intersection(instance.locals, trial, inner_tol * t);
  return std::sqrt(squared_distance(x, proj)) / t;
}

ReferenceSolution solve_reference(const ProblemInstance& instance, double tol) {
  if (instance.locals.empty()) throw InvalidArgument("solve_reference: empty instance");
  if (!(tol > 0.0)) throw InvalidArgument("solve_reference: tol must be positive");
  const std::size_t d = instance.locals.front().dim();
  const double t = 1.0 / total_smoothness(instance);
  // Projection error stays an order of magnitude below the mapping tolerance.
  const double inner_tol = 0.1 * tol * t;

  Vector x = project_intersection(instance.locals, Vector(d, 0.0), inner_tol);
  constexpr std::size_t kMaxIters = 1000000;
  for (std::size_t it = 0; it < kMaxIters; ++it) {
    Vector trial = x;
    axpy(-t, total_gradient(instance, x), trial);
    Vector next = project_intersection(instance.locals, trial, inner_tol);
    const double mapping = std::sqrt(squared_distance(x, next)) / t;
    // The certificate refers to x itself, so x (not the next step) is returned.
    if (mapping <= tol) {
      ReferenceSolution out;
      out.value = total_objective(instance, x);
      out.x = std::move(x);
      out.iterations = it + 1;
      out.mapping_norm = mapping;
      return out;
    }
    x = std::move(next);
  }
  throw NoConvergence("solve_reference: iteration cap reached");
}

}  // namespace fdgmaa
