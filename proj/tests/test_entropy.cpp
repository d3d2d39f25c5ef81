#include "oracles.hpp"
#include "parset/entropy.hpp"
#include "parset/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace parset;
using namespace parset::entropy;

namespace {

GaussianMixture random_mixture(std::uint64_t seed, int d, int k, double variance) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXd atoms(d, k);
  Eigen::VectorXd w(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) atoms(j, i) = 4.0 * rng.uniform() - 2.0;
    w[i] = 0.1 + rng.uniform();
  }
  return {atoms, w / w.sum(), variance};
}

double half_log_2pie(double d, double r) { return 0.5 * d * std::log(2.0 * M_PI * M_E * r); }

// Fisher information of a one-dimensional mixture by quadrature of p'^2 / p.
double fisher_quadrature(const GaussianMixture& gm) {
  const double s = std::sqrt(gm.variance());
  const double a = gm.atoms().minCoeff() - 12.0 * s, b = gm.atoms().maxCoeff() + 12.0 * s;
  return oracle::trapezoid(
      [&](double x) {
        double p = 0.0, dp = 0.0;
        for (Eigen::Index i = 0; i < gm.size(); ++i) {
          const double z = x - gm.atoms()(0, i);
          const double g = gm.weights()[i] * std::exp(-z * z / (2.0 * gm.variance())) / std::sqrt(2.0 * M_PI * gm.variance());
          p += g;
          dp -= g * z / gm.variance();
        }
        return p > 0.0 ? dp * dp / p : 0.0;
      },
      a, b, 20000);
}

}  // namespace

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(GaussianMixture(Eigen::MatrixXd::Zero(1, 2), Eigen::Vector2d(0.5, 0.6), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianMixture(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianMixture(Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Ones(1), 1.0), std::invalid_argument);
}

TEST_CASE("density matches direct summation") {
  const auto one = GaussianMixture::single(Eigen::VectorXd::Zero(1), 1.0);
  CHECK(mixture_density(one, Eigen::VectorXd::Zero(1)) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
  for (int k = 0; k < 20; ++k) {
    const auto gm = random_mixture(k, 1 + k % 3, 1 + k % 5, 0.3 + 0.1 * k);
    CounterRng rng(99, k);
    Eigen::VectorXd x(gm.dim());
    rng.fill_normal(x);
    const double naive = oracle::naive_mixture_density(gm.atoms(), gm.weights(), gm.variance(), x);
    CHECK(mixture_density(gm, x) == doctest::Approx(naive).epsilon(1e-12));
  }
  // Far in the tail the log density stays finite.
  const auto gm = random_mixture(1, 2, 3, 0.1);
  CHECK(std::isfinite(mixture_log_density(gm, Eigen::Vector2d(1e3, -1e3))));
}

TEST_CASE("score is the gradient of the log density") {
  const auto gm = random_mixture(4, 2, 3, 0.5);
  const Eigen::Vector2d x(0.3, -0.7);
  const double h = 1e-6;
  const auto score = mixture_score(gm, x);
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e[k] = h;
    const double fd = (mixture_log_density(gm, x + e) - mixture_log_density(gm, x - e)) / (2.0 * h);
    CHECK(score[k] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("convolution of mixtures") {
  const auto a = GaussianMixture::single(Eigen::VectorXd::Constant(1, 1.0), 0.5);
  const auto b = GaussianMixture::single(Eigen::VectorXd::Constant(1, 2.0), 0.25);
  const auto c = convolve_mixtures(a, b);
  CHECK(c.size() == 1);
  CHECK(c.atoms()(0, 0) == doctest::Approx(3.0));
  CHECK(c.variance() == doctest::Approx(0.75));

  const auto x = random_mixture(7, 1, 3, 0.4), y = random_mixture(8, 1, 4, 0.6);
  const auto s = convolve_mixtures(x, y);
  CHECK(std::abs(s.weights().sum() - 1.0) < 1e-12);
  // Density of the sum equals the convolution integral of the two densities.
  for (double t : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
    const double integral = oracle::trapezoid(
        [&](double u) {
          return mixture_density(x, Eigen::VectorXd::Constant(1, u)) * mixture_density(y, Eigen::VectorXd::Constant(1, t - u));
        },
        -15.0, 15.0, 30000);
    CHECK(mixture_density(s, Eigen::VectorXd::Constant(1, t)) == doctest::Approx(integral).epsilon(1e-8));
  }
  // Symmetric atoms merge: {-1, 1} + {-1, 1} has atoms {-2, 0, 2}.
  Eigen::MatrixXd sym(1, 2);
  sym << -1.0, 1.0;
  const GaussianMixture z(sym, Eigen::Vector2d(0.5, 0.5), 1.0);
  const auto zz = convolve_mixtures(z, z);
  CHECK(zz.size() == 3);
}

TEST_CASE("entropy quadrature") {
  for (double r : {0.1, 1.0, 4.0}) {
    const auto q = entropy_quadrature(GaussianMixture::single(Eigen::VectorXd::Zero(1), r));
    CHECK(std::abs(q.value - half_log_2pie(1, r)) < 1e-8);
    CHECK(q.truncation_error < 1e-20);
  }
  Eigen::MatrixXd far(1, 2);
  far << 0.0, 1000.0;
  const GaussianMixture two(far, Eigen::Vector2d(0.5, 0.5), 1.0);
  CHECK(std::abs(entropy_quadrature(two).value - (std::log(2.0) + half_log_2pie(1, 1.0))) < 1e-8);
  const auto gm = random_mixture(3, 1, 4, 0.3);
  CHECK(std::abs(entropy_quadrature(gm, 12.0, 64).value - entropy_quadrature(gm, 12.0, 128).value) < 1e-8);
  CHECK_THROWS_AS(entropy_quadrature(random_mixture(3, 2, 2, 1.0)), std::invalid_argument);
}

TEST_CASE("monte carlo entropy is unbiased") {
  const auto g2 = GaussianMixture::single(Eigen::VectorXd::Zero(2), 0.7);
  const auto e = entropy_mc(g2, 200000, 1);
  CHECK(std::abs(e.value - half_log_2pie(2, 0.7)) <= 4.0 * e.std_error + 1e-12);

  const auto gm = random_mixture(11, 1, 3, 0.5);
  const double exact = entropy_quadrature(gm).value;
  MomentAccumulator pooled;
  double var_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto est = entropy_mc(gm, 50000, seed);
    pooled.add(est.value);
    var_sum += est.std_error * est.std_error;
  }
  const double pooled_se = std::sqrt(var_sum) / 8.0;
  CHECK(std::abs(pooled.mean - exact) <= 3.0 * pooled_se);
  CHECK(entropy_mc(gm, 10000, 5, 1).value == entropy_mc(gm, 10000, 5, 3).value);
}

TEST_CASE("adding an independent variable increases entropy") {
  const auto x = random_mixture(21, 1, 3, 0.3), y = random_mixture(22, 1, 2, 0.6);
  const double hs = entropy_quadrature(convolve_mixtures(x, y)).value;
  CHECK(hs >= entropy_quadrature(x).value);
  CHECK(hs >= entropy_quadrature(y).value);
}

TEST_CASE("reverse entropy power inequality") {
  const DiscreteLaw atom{Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Ones(1)};
  const auto single = reverse_epi_check(atom, atom, 0.5, 1000, 1);
  CHECK(single.h_sum.method == Method::Analytic);
  CHECK(single.report.verdict == Verdict::Pass);
  CHECK(single.report.slack == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(single.h_sum.value == doctest::Approx(half_log_2pie(2, 1.0)));

  Eigen::MatrixXd a(2, 3);
  a << 0.0, 1.0, -0.5,
       0.5, 0.0, 1.0;
  const DiscreteLaw two_d{a, Eigen::Vector3d(0.2, 0.3, 0.5)};
  const auto mc = reverse_epi_check(two_d, two_d, 0.3, 40000, 2);
  CHECK(mc.h_sum.method == Method::MonteCarlo);
  CHECK(mc.report.verdict == Verdict::Pass);
  CHECK_THROWS_AS(reverse_epi_check(atom, atom, 0.0, 10, 1), std::invalid_argument);
}

TEST_CASE("pointwise convolution lemma") {
  for (int k = 0; k < 200; ++k) {
    CounterRng rng(71, k);
    const int d = 1 + k % 3;
    Eigen::VectorXd a(d), b(d);
    rng.fill_normal(a);
    rng.fill_normal(b);
    const double r = 0.01 + 2.0 * rng.uniform();
    CHECK(pointwise_lemma_check(a, b, r));
    CHECK(pointwise_log_ratio(a, b, r) ==
          doctest::Approx(0.5 * d * std::log(M_PI * r) + (a - b).squaredNorm() / (4.0 * r)).epsilon(1e-10));
    CHECK(pointwise_log_ratio(a, a, r) == doctest::Approx(0.5 * d * std::log(M_PI * r)).epsilon(1e-12));
  }
}

TEST_CASE("fisher information") {
  const auto g = GaussianMixture::single(Eigen::VectorXd::Zero(2), 0.5);
  const auto j = fisher_information_mc(g, 200000, 3);
  CHECK(std::abs(j.value - 4.0) <= 4.0 * j.std_error);
  for (int k = 0; k < 5; ++k) {
    const auto gm = random_mixture(30 + k, 1, 2 + k % 3, 0.4);
    const auto est = fisher_information_mc(gm, 200000, k);
    CHECK(std::abs(est.value - fisher_quadrature(gm)) <= 4.0 * est.std_error);
    CHECK(fisher_bound_check(gm, 50000, k).verdict == Verdict::Pass);
  }
  // Translating every atom leaves J unchanged (same draws, shifted).
  const auto gm = random_mixture(40, 2, 3, 0.6);
  const GaussianMixture shifted((gm.atoms().colwise() + Eigen::Vector2d(5.0, -3.0)).eval(), gm.weights(), gm.variance());
  CHECK(fisher_information_mc(gm, 20000, 1).value ==
        doctest::Approx(fisher_information_mc(shifted, 20000, 1).value).epsilon(1e-9));
}

TEST_CASE("de bruijn identity") {
  const auto g = GaussianMixture::single(Eigen::VectorXd::Zero(1), 1.0);
  CHECK(de_bruijn_check(g, 1e-3, 100000, 1).verdict == Verdict::Pass);
  Eigen::MatrixXd two(1, 2);
  two << -1.0, 1.0;
  const GaussianMixture pair(two, Eigen::Vector2d(0.5, 0.5), 0.5);
  const auto rep = de_bruijn_check(pair, 1e-3, 200000, 2);
  CHECK(rep.verdict == Verdict::Pass);
  // Quadrature entropies at t0 +- dt agree with J/2 from quadrature.
  const GaussianMixture plus(two, Eigen::Vector2d(0.5, 0.5), 0.5 + 1e-3), minus(two, Eigen::Vector2d(0.5, 0.5), 0.5 - 1e-3);
  const double fd = (entropy_quadrature(plus).value - entropy_quadrature(minus).value) / 2e-3;
  CHECK(fd == doctest::Approx(0.5 * fisher_quadrature(pair)).epsilon(1e-5));
  CHECK_THROWS_AS(de_bruijn_check(pair, 1.0, 100, 1), std::invalid_argument);
}
