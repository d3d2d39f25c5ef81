#include "oracles.hpp"
#include "parset/random.hpp"
#include "parset/robust_risk.hpp"

#include <doctest.h>

#include <cmath>

using namespace parset;
using namespace parset::rr;

namespace {

PointSet cloud(CounterRng& rng, int n, int d, double shift = 0.0) {
  Eigen::MatrixXd m(d, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) m(k, i) = rng.uniform() + shift;
  }
  return PointSet(m);
}

Eigen::VectorXd weights(CounterRng& rng, int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.05 + rng.uniform();
  return w / w.sum();
}

}  // namespace

TEST_CASE("empirical measures validate weights") {
  const auto p = PointSet::from_rows({{0.0}, {1.0}});
  CHECK_THROWS_AS(EmpiricalMeasure(p, Eigen::Vector2d(0.5, 0.6)), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalMeasure(p, Eigen::Vector2d(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalMeasure(p, Eigen::Vector3d(0.2, 0.3, 0.5)), std::invalid_argument);
  CHECK(EmpiricalMeasure::uniform(p).weights()[1] == 0.5);
}

TEST_CASE("d_r equals the permutation brute force") {
  for (int trial = 0; trial < 300; ++trial) {
    CounterRng rng(31, trial);
    const int n = 1 + static_cast<int>(rng.uniform() * 7), d = 1 + static_cast<int>(rng.uniform() * 3);
    const auto x = cloud(rng, n, d), y = cloud(rng, n, d, 0.2);
    const double r = 0.02 + 0.6 * rng.uniform();
    const auto res = d_r_uniform(x, y, r);
    CHECK(res.value == oracle::brute_force_d_r(x, y, r));
    const auto w = d_r_weighted(EmpiricalMeasure::uniform(x), EmpiricalMeasure::uniform(y), r);
    CHECK(std::abs(w.value - res.value) <= 1e-12);
  }
}

TEST_CASE("d_r certificates are feasible") {
  CounterRng rng(41, 0);
  const EmpiricalMeasure mu(cloud(rng, 12, 2), weights(rng, 12));
  const EmpiricalMeasure nu(cloud(rng, 9, 2, 0.3), weights(rng, 9));
  const double r = 0.15;
  const auto res = d_r_weighted(mu, nu, r);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(12), in = Eigen::VectorXd::Zero(9);
  double mass = 0.0;
  for (const auto& c : res.certificate) {
    CHECK((mu.points().point(c.source) - nu.points().point(c.target)).norm() <= 2.0 * r);
    out[c.source] += c.mass;
    in[c.target] += c.mass;
    mass += c.mass;
  }
  CHECK(mass == doctest::Approx(1.0 - res.value).epsilon(1e-12));
  CHECK(((out - mu.weights()).array() <= 1e-12).all());
  CHECK(((in - nu.weights()).array() <= 1e-12).all());
}

TEST_CASE("d_r edge cases") {
  const auto x = PointSet::from_rows({{0.0}, {1.0}, {2.0}});
  const auto y = PointSet::from_rows({{0.0}, {1.0}, {5.0}});
  // r = 0 is total variation between the empirical measures.
  CHECK(d_r_uniform(x, y, 0.0).value == doctest::Approx(1.0 / 3.0));
  // Distance exactly 2r counts as matchable.
  CHECK(d_r_uniform(PointSet::from_rows({{0.0}}), PointSet::from_rows({{1.0}}), 0.5).value == 0.0);
  CHECK(d_r_uniform(x, y, 100.0).value == 0.0);
  CHECK_THROWS_AS(d_r_uniform(x, PointSet::from_rows({{0.0}}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(d_r_uniform(x, y, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(d_r_uniform(x, PointSet::from_rows({{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}}), 1.0),
                  std::invalid_argument);
  CHECK(robust_risk(0.2) == doctest::Approx(0.4));
  CHECK_THROWS_AS(robust_risk(1.5), std::invalid_argument);
}

TEST_CASE("w1 agrees with the sorted formula in one dimension and dominates d_r") {
  for (int trial = 0; trial < 40; ++trial) {
    CounterRng rng(51, trial);
    const int n = 1 + static_cast<int>(rng.uniform() * 30), m = 1 + static_cast<int>(rng.uniform() * 30);
    const EmpiricalMeasure mu(cloud(rng, n, 1), weights(rng, n));
    const EmpiricalMeasure nu(cloud(rng, m, 1, 0.4), weights(rng, m));
    CHECK(w1_empirical(mu, nu).value == doctest::Approx(w1_sorted_1d(mu, nu)).epsilon(1e-10));
    CHECK(check_w1_domination(mu, nu, 0.05 + 0.3 * rng.uniform()).verdict == Verdict::Pass);
  }
  CounterRng rng(5, 5);
  const auto big = EmpiricalMeasure::uniform(cloud(rng, 501, 1));
  CHECK_THROWS_AS(w1_empirical(big, big), std::invalid_argument);
}

TEST_CASE("decision region risk on exact regions") {
  const auto mu0 = PointSet::from_rows({{-0.5, 0.0}, {0.05, 0.0}, {0.5, 0.0}, {-2.0, 1.0}});
  const auto mu1 = PointSet::from_rows({{0.3, 0.0}, {-0.05, 0.0}, {-0.5, 0.0}, {2.0, 0.0}});
  const HalfSpace left{Eigen::Vector2d(1.0, 0.0), 0.0};
  // A_r = {x <= 0.1} holds 3 of mu0; (A^c)_r = {x >= -0.1} holds 3 of mu1.
  CHECK(decision_region_risk(left, mu0, mu1, 0.1) == doctest::Approx(0.75));
  CHECK(decision_region_risk(EmptySet{2}, mu0, mu1, 0.1) == doctest::Approx(0.5));
  CHECK(decision_region_risk(FullSpace{2}, mu0, mu1, 0.1) == doctest::Approx(0.5));
  // Ball of radius 1 at the origin: A_r is radius 1.1; complement dilation is |x| >= 0.9.
  const Ball ball{Eigen::Vector2d::Zero(), 1.0};
  CHECK(decision_region_risk(ball, mu0, mu1, 0.1) == doctest::Approx(0.5 * (3.0 / 4.0 + 1.0 / 4.0)));
  const ParallelSetSpec union_of_balls(PointSet::from_rows({{0.0, 0.0}}), NormKind::L2, 1.0);
  CHECK_THROWS_AS(decision_region_risk(union_of_balls, mu0, mu1, 0.1), std::invalid_argument);
}

TEST_CASE("gaussian smoothing is deterministic per point") {
  CounterRng rng(3, 3);
  const auto x = cloud(rng, 50, 2);
  const auto a = gaussian_smooth(x, 0.3, 99), b = gaussian_smooth(x, 0.3, 99), c = gaussian_smooth(x, 0.3, 100);
  CHECK(a.coords() == b.coords());
  CHECK(a.coords() != c.coords());
  CHECK(gaussian_smooth(x, 0.0, 1).coords() == x.coords());
  CHECK_THROWS_AS(gaussian_smooth(x, -1.0, 1), std::invalid_argument);
}

TEST_CASE("coupling sandwich holds on random quadruples") {
  for (int trial = 0; trial < 40; ++trial) {
    CounterRng rng(61, trial);
    const int d = 1 + trial % 3;
    auto m = [&](double shift) {
      const int n = 1 + static_cast<int>(rng.uniform() * 15);
      return EmpiricalMeasure(cloud(rng, n, d, shift), weights(rng, n));
    };
    const auto mu0 = m(0.0), mu1 = m(0.4), mu0n = m(0.0), mu1n = m(0.4);
    const double r = 0.05 + 0.5 * rng.uniform();
    CHECK(coupling_sandwich_check(mu0, mu1, mu0n, mu1n, r, r / 3.0 * rng.uniform() + 1e-6).verdict == Verdict::Pass);
  }
  CounterRng rng(1, 1);
  const auto mu = EmpiricalMeasure::uniform(cloud(rng, 3, 1));
  CHECK_THROWS_AS(coupling_sandwich_check(mu, mu, mu, mu, 0.3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(coupling_sandwich_check(mu, mu, mu, mu, 0.3, 0.0), std::invalid_argument);
}

TEST_CASE("sample generators") {
  const auto ball = draw_samples(UniformBallGen{Eigen::Vector3d(1.0, 0.0, 0.0), 2.0}, 2000, 5);
  for (Eigen::Index i = 0; i < ball.size(); ++i) CHECK((ball.point(i) - Eigen::Vector3d(1.0, 0.0, 0.0)).norm() <= 2.0);
  GaussianMixtureGen g{Eigen::MatrixXd(1, 2), Eigen::Vector2d(0.25, 0.75), 0.1};
  g.atoms << -1.0, 1.0;
  const auto s = draw_samples(g, 40000, 6);
  CHECK(s.coords().mean() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(draw_samples(g, 10, 6).coords() == draw_samples(g, 10, 6).coords());
}

TEST_CASE("convergence experiment is reproducible and worker independent") {
  ConvergenceConfig cc;
  cc.gen0 = GaussianMixtureGen{Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Ones(1), 0.0};
  cc.gen1 = GaussianMixtureGen{Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Ones(1), 0.0};
  cc.n_grid = {10, 40};
  cc.trials = 4;
  cc.ref_multiplier = 4;
  cc.seed = 12;
  const auto a = convergence_experiment(cc);
  cc.workers = 3;
  const auto b = convergence_experiment(cc);
  REQUIRE(a.rows.size() == 8);
  CHECK(a.reference_n == 160);
  for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].d_r == b.rows[k].d_r);
  CHECK(a.summary.size() == 2);
  CHECK(a.summary[0].q10 <= a.summary[0].median);
  CHECK(a.summary[0].median <= a.summary[0].q90);
  cc.n_grid.clear();
  CHECK_THROWS_AS(convergence_experiment(cc), std::invalid_argument);
}

TEST_CASE("median inversions count strict increases") {
  ConvergenceResult r;
  r.summary = {{1, 0, 0.5, 0}, {2, 0, 0.4, 0}, {3, 0, 0.45, 0}, {4, 0, 0.1, 0}};
  CHECK(median_inversions(r) == 1);
}

TEST_CASE("d_r is monotone and Lipschitz in r for smoothed samples") {
  const auto x = gaussian_smooth(PointSet(Eigen::MatrixXd::Zero(2, 60)), 0.3, 1);
  const auto y = gaussian_smooth(PointSet(Eigen::MatrixXd::Constant(2, 60, 0.4)), 0.3, 2);
  const auto mu0 = EmpiricalMeasure::uniform(x), mu1 = EmpiricalMeasure::uniform(y);
  CHECK(lipschitz_in_r_check(mu0, mu1, 0.1, 0.12, 0.3).verdict == Verdict::Pass);
  double prev = 1.0;
  for (double r = 0.0; r < 1.0; r += 0.05) {
    const double v = d_r_uniform(x, y, r).value;
    CHECK(v <= prev);
    prev = v;
  }
}
