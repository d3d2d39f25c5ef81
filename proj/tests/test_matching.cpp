#include "oracles.hpp"
#include "parset/matching.hpp"
#include "parset/random.hpp"
#include "parset/transport.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace parset;

namespace {

int brute_force_matching(const std::vector<std::vector<int>>& adj, int right) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> perm(std::max(n, right));
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int m = 0;
    for (int i = 0; i < n; ++i) {
      if (perm[i] < right && std::find(adj[i].begin(), adj[i].end(), perm[i]) != adj[i].end()) ++m;
    }
    best = std::max(best, m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("hopcroft-karp finds maximum matchings") {
  for (int trial = 0; trial < 300; ++trial) {
    CounterRng rng(17, trial);
    const int n = 1 + static_cast<int>(rng.uniform() * 7), m = 1 + static_cast<int>(rng.uniform() * 7);
    const double p = rng.uniform();
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        if (rng.uniform() < p) adj[i].push_back(j);
      }
    }
    const auto res = hopcroft_karp(adj, m);
    CHECK(res.size == brute_force_matching(adj, m));
    int counted = 0;
    for (int i = 0; i < n; ++i) {
      if (res.match_left[i] >= 0) {
        ++counted;
        CHECK(res.match_right[res.match_left[i]] == i);
      }
    }
    CHECK(counted == res.size);
  }
}

TEST_CASE("max flow on a small network") {
  MaxFlow f(4);
  const int a = f.add_edge(0, 1, 0.5);
  f.add_edge(0, 2, 0.5);
  f.add_edge(1, 3, 0.3);
  f.add_edge(2, 3, 1.0);
  const int cross = f.add_edge(1, 2, 0.1);
  CHECK(f.solve(0, 3) == doctest::Approx(0.9));
  CHECK(f.flow_on(a) == doctest::Approx(0.4));
  CHECK(f.flow_on(cross) == doctest::Approx(0.1));
  CHECK_THROWS_AS(f.add_edge(0, 1, -1.0), std::invalid_argument);
}

TEST_CASE("transport matches permutation brute force on uniform marginals") {
  for (int trial = 0; trial < 60; ++trial) {
    CounterRng rng(23, trial);
    const int n = 1 + static_cast<int>(rng.uniform() * 6);
    Eigen::MatrixXd x(2, n), y(2, n);
    for (int i = 0; i < n; ++i) {
      x.col(i) << rng.uniform(), rng.uniform();
      y.col(i) << rng.uniform() + 0.3, rng.uniform();
    }
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) cost(i, j) = (x.col(i) - y.col(j)).norm();
    }
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
    const auto sol = solve_transport(cost, w, w);
    CHECK(sol.cost == doctest::Approx(oracle::brute_force_w1(PointSet(x), PointSet(y))).epsilon(1e-10));
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n), col = Eigen::VectorXd::Zero(n);
    for (const auto& e : sol.plan) {
      row[e.source] += e.mass;
      col[e.target] += e.mass;
    }
    CHECK((row - w).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((col - w).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("transport with unequal weights") {
  Eigen::MatrixXd cost(2, 3);
  cost << 0, 1, 2,
          2, 1, 0;
  const auto sol = solve_transport(cost, Eigen::Vector2d(0.5, 0.5), Eigen::Vector3d(0.25, 0.5, 0.25));
  CHECK(sol.cost == doctest::Approx(0.5));
  CHECK_THROWS_AS(solve_transport(cost, Eigen::Vector3d(0.3, 0.3, 0.4), Eigen::Vector3d(0.3, 0.3, 0.4)),
                  std::invalid_argument);
}
