#include <cmath>
#include <random>

#include "doctest.h"
#include "fdgmaa/conjugate.hpp"
#include "fdgmaa/errors.hpp"
#include "oracles.hpp"

using namespace fdgmaa;

TEST_CASE("pure ridge with a huge ball has the quadratic conjugate") {
  const double mu = 0.5;
  const LocalProblem p(DenseMatrix(0, 3), Vector{}, mu, 1.0, Vector(3, 0.0), 1e6);
  const Vector w{0.3, -0.2, 0.1};
  const DualOracleResult r = dual_oracle(p, w, 1e-12);
  for (std::size_t k = 0; k < 3; ++k) CHECK(r.x[k] == doctest::Approx(w[k] / mu).epsilon(1e-10));
  CHECK(r.value == doctest::Approx(squared_norm(w) / (2 * mu)).epsilon(1e-10));
  CHECK(r.grad == r.x);
}

TEST_CASE("unit-ball conjugate is attained at the projection of w") {
  const LocalProblem p(DenseMatrix(0, 3), Vector{}, 1.0, 1.0, Vector(3, 0.0), 1.0);
  const DualOracleResult r = dual_oracle(p, Vector{2.0, 0.0, 0.0}, 1e-12);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.x[1]) <= 1e-12);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("oracle rejects bad input") {
  const LocalProblem flat(DenseMatrix(0, 2), Vector{}, 0.0, 1.0, Vector(2, 0.0), 1.0);
  CHECK_THROWS_AS(dual_oracle(flat, Vector{1, 1}, 1e-10), InvalidArgument);
  const LocalProblem p(DenseMatrix(0, 2), Vector{}, 1.0, 1.0, Vector(2, 0.0), 1.0);
  CHECK_THROWS_AS(dual_oracle(p, Vector{1, 1}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(dual_oracle(p, Vector{1}, 1e-10), InvalidArgument);
}

TEST_CASE("benchmark oracles: Fenchel-Young, smoothness, monotonicity, warm starts") {
  const ProblemInstance inst = generate_instance(1, 30, 20, 20, 0.01);
  const double tol = kDefaultOracleTol;
  std::mt19937_64 rng(10);
  for (int s = 0; s < 10; ++s) {
    const auto& p = inst.locals[static_cast<std::size_t>(s) * 3];
    const Vector w = oracle::random_vector(rng, 20, 0.01);
    const Vector u = oracle::random_vector(rng, 20, 0.01);
    const DualOracleResult rw = dual_oracle(p, w, tol);
    const DualOracleResult ru = dual_oracle(p, u, tol);

    // Fenchel-Young equality at the maximizer.
    CHECK(std::abs(rw.value + eval_local(p, rw.x) - dot(w, rw.x)) <= 10 * tol);
    // Gradient is (1/mu)-Lipschitz up to the inner tolerance.
    CHECK(std::sqrt(squared_distance(rw.grad, ru.grad)) <=
          std::sqrt(squared_distance(w, u)) / p.mu() + 2 * tol);
    // Monotone gradient of a convex function.
    CHECK(dot(subtract(rw.grad, ru.grad), subtract(w, u)) >= -10 * tol);
    // Warm and cold starts agree.
    const DualOracleResult warm = dual_oracle(p, w, tol, ru.x);
    CHECK(std::sqrt(squared_distance(warm.x, rw.x)) <= 10 * tol / p.mu());
    CHECK(std::sqrt(squared_distance(rw.x, p.ball_center())) <= p.ball_radius() * (1 + 1e-12));
  }
}

TEST_CASE("oracle value matches the conjugate definition against sampled feasible points") {
  const ProblemInstance inst = generate_instance(3, 2, 5, 6, 0.1);
  std::mt19937_64 rng(12);
  const auto& p = inst.locals[0];
  const Vector w = oracle::random_vector(rng, 5, 0.1);
  const DualOracleResult r = dual_oracle(p, w, 1e-12);
  for (int s = 0; s < 200; ++s) {
    Vector x = oracle::random_vector(rng, 5);
    x = project_ball(p.ball_center(), p.ball_radius(), x);
    CHECK(dot(w, x) - eval_smooth(p, x) <= r.value + 1e-12);
  }
}
