#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "fdgmaa/errors.hpp"
#include "fdgmaa/network.hpp"
#include "fdgmaa/serialization.hpp"
#include "oracles.hpp"

using namespace fdgmaa;

TEST_CASE("two nodes and one slot") {
  const GraphSchedule s = generate_periodic_schedule(1, 2, 1, 0.1);
  REQUIRE(s.period() == 1);
  CHECK(s.slot(0) == std::vector<Edge>{{0, 1}});
  CHECK_THROWS_AS(generate_periodic_schedule(1, 2, 2, 0.1), InvalidParams);
  CHECK_THROWS_AS(generate_periodic_schedule(1, 1, 1, 0.1), InvalidArgument);
}

TEST_CASE("benchmark schedule slots partition a connected base graph") {
  const GraphSchedule s = generate_periodic_schedule(3, 30, 5, 0.1);
  REQUIRE(s.period() == 5);
  std::set<Edge> all;
  std::size_t total = 0;
  for (const auto& slot : s.slots()) {
    CHECK_FALSE(slot.empty());
    total += slot.size();
    all.insert(slot.begin(), slot.end());
  }
  CHECK(all.size() == total);  // the slots are disjoint
  const auto u = union_edges(s, 0, 5);
  CHECK(std::set<Edge>(u.begin(), u.end()) == all);
  CHECK(oracle::bfs_connected(30, u));
  CHECK(verify_b_connectivity(s, 5));
  CHECK(s == generate_periodic_schedule(3, 30, 5, 0.1));
}

TEST_CASE("schedule normalizes and validates edges") {
  const GraphSchedule s(3, {{{2, 0}, {0, 2}, {1, 2}}});
  CHECK(s.slot(0) == std::vector<Edge>{{0, 2}, {1, 2}});
  CHECK_THROWS_AS(GraphSchedule(3, {{{1, 1}}}), InvalidArgument);
  CHECK_THROWS_AS(GraphSchedule(3, {{{0, 3}}}), InvalidArgument);
  CHECK_THROWS_AS(GraphSchedule(3, {}), InvalidArgument);
}

TEST_CASE("Metropolis weights on small slots") {
  const GraphSchedule single(4, {{{1, 2}}});
  const WeightedEdges e = edges_at(single, 0);
  REQUIRE(e.size() == 1);
  CHECK(e[0].h == 1.0);

  const GraphSchedule star(4, {{{0, 1}, {0, 2}, {0, 3}}});
  double center = 0.0;
  for (const auto& w : edges_at(star, 7)) {
    CHECK(w.h == doctest::Approx(1.0 / 3.0));
    center += w.h;
  }
  CHECK(center == doctest::Approx(1.0));
}

TEST_CASE("property: weight sums, lower bound and periodicity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 5 + seed;
    const std::size_t period = 1 + seed % 6;
    const GraphSchedule s = generate_periodic_schedule(seed, n, period, 0.3);
    for (std::size_t k = 0; k < 2 * period; ++k) {
      const WeightedEdges e = edges_at(s, k);
      CHECK(e == edges_at(s, k + period));
      std::vector<double> sums(n, 0.0);
      for (const auto& w : e) {
        sums[w.i] += w.h;
        sums[w.j] += w.h;
        CHECK(w.h >= 1.0 / static_cast<double>(n - 1));
      }
      for (double v : sums) CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("B-connectivity checks") {
  // Two triangles that never connect.
  const GraphSchedule split(6, {{{0, 1}, {1, 2}, {0, 2}}, {{3, 4}, {4, 5}, {3, 5}}});
  CHECK_FALSE(verify_b_connectivity(split, 2));
  CHECK_FALSE(verify_b_connectivity(split, 0));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GraphSchedule s = generate_periodic_schedule(seed, 12, 6, 0.2);
    const std::size_t b = 3;
    bool expected = true;
    for (std::size_t k = 0; k < s.period(); ++k) {
      expected = expected && oracle::bfs_connected(12, union_edges(s, k, b));
    }
    CHECK(verify_b_connectivity(s, b) == expected);
    CHECK(verify_b_connectivity(s, s.period()));
  }
}

TEST_CASE("union Laplacians") {
  const GraphSchedule one(2, {{{0, 1}}});
  const DenseMatrix l1 = union_laplacian(one, 0, 1);
  CHECK(Vector(l1.entries().begin(), l1.entries().end()) == Vector{1, -1, -1, 1});

  const GraphSchedule tri(3, {{{0, 1}}, {{1, 2}}, {{0, 2}}});
  const DenseMatrix l3 = union_laplacian(tri, 1, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(l3(i, j) == (i == j ? 2.0 : -1.0));
  }

  const GraphSchedule s = generate_periodic_schedule(4, 15, 4, 0.2);
  for (std::size_t k = 0; k < 4; ++k) {
    const DenseMatrix l = union_laplacian(s, k, 2);
    for (std::size_t i = 0; i < 15; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < 15; ++j) {
        row += l(i, j);
        CHECK(l(i, j) == l(j, i));
      }
      CHECK(row == 0.0);
    }
    const Eigen::VectorXd ev = oracle::dense_eigenvalues(oracle::to_eigen(l));
    CHECK(ev.minCoeff() >= -1e-10);
  }
}

TEST_CASE("schedule JSON round trip") {
  const GraphSchedule s = generate_periodic_schedule(5, 10, 3, 0.2);
  CHECK(schedule_from_json(Json::parse(schedule_to_json(s).dump())) == s);
}
