#pragma once

#include "parset/bounds.hpp"
#include "parset/core.hpp"
#include "parset/region.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace parset::rr {

/// Weighted point cloud; weights are positive and sum to one.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(PointSet points, Eigen::VectorXd weights);
  static EmpiricalMeasure uniform(PointSet points);

  const PointSet& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return points_.size(); }
  Eigen::Index dim() const { return points_.dim(); }

 private:
  PointSet points_;
  Eigen::VectorXd weights_;
};

struct Coupling {
  int source;
  int target;
  double mass;
};

/// Value of D_r (in [0, 1]) or W_1 (>= 0) with the coupling that attains it.
/// For D_r the certificate lists matched mass, all within distance 2r.
struct TransportResult {
  double value = 0.0;
  std::vector<Coupling> certificate;
  double threshold_r = 0.0;
};

/// D_r between two uniform empirical measures of equal size: one minus the
/// fraction of points matchable within distance 2r (maximum matching).
TransportResult d_r_uniform(const PointSet& x, const PointSet& y, double r);

/// D_r between weighted empirical measures, via max-flow.
TransportResult d_r_weighted(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r);

/// Exact W_1 with Euclidean cost. Both sides are limited to kMaxW1Atoms.
inline constexpr Eigen::Index kMaxW1Atoms = 500;
TransportResult w1_empirical(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
/// One-dimensional W_1 as the integral of |F - G|.
double w1_sorted_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// D_r <= W_1 / (2r), both sides computed exactly.
BoundReport check_w1_domination(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r);

/// Minimum adversarial error probability, (1 - D_r) / 2.
double robust_risk(double d_r_value);

/// Plug-in (mu0(A_r) + mu1((A^c)_r)) / 2 for a region with exact dilations
/// (half-space, ball, empty, full). Samples are uniformly weighted.
double decision_region_risk(const Region& region, const PointSet& mu0_samples, const PointSet& mu1_samples,
                            double r);

/// Adds independent N(0, sigma^2 I) noise to each point; point i uses its own
/// counter stream, so the output depends only on (samples, sigma, seed).
PointSet gaussian_smooth(const PointSet& samples, double sigma, std::uint64_t seed);

/// Both inequalities relating D at (r +- 2 eta) on the population measures to
/// D_r on the empirical ones; requires 0 < eta < r/3.
BoundReport coupling_sandwich_check(const EmpiricalMeasure& mu0, const EmpiricalMeasure& mu1,
                                    const EmpiricalMeasure& mu0n, const EmpiricalMeasure& mu1n, double r,
                                    double eta);

// Sample generators for the convergence experiment.
struct GaussianMixtureGen {
  Eigen::MatrixXd atoms;  // dim x k
  Eigen::VectorXd weights;
  double sigma = 0.0;
};
struct UniformBallGen {
  Eigen::VectorXd center;
  double radius = 1.0;
};
using DistributionSpec = std::variant<GaussianMixtureGen, UniformBallGen>;

Eigen::Index spec_dim(const DistributionSpec& spec);
PointSet draw_samples(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

struct ConvergenceConfig {
  DistributionSpec gen0;
  DistributionSpec gen1;
  double r = 0.1;
  double sigma = 0.2;
  std::vector<std::size_t> n_grid{25, 50, 100, 200, 400};
  int trials = 20;
  std::uint64_t seed = 0;
  std::size_t ref_multiplier = 8;
  unsigned workers = 1;
};

struct ConvergenceRow {
  std::size_t n;
  int trial;
  double d_r;
  double abs_dev;
};

struct ConvergenceSummary {
  std::size_t n;
  double q10;
  double median;
  double q90;
};

struct ConvergenceResult {
  std::size_t reference_n = 0;
  double reference_d_r = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSummary> summary;
};

ConvergenceResult convergence_experiment(const ConvergenceConfig& cfg);

/// Number of strict increases in the median deviation along the grid.
int median_inversions(const ConvergenceResult& result);

/// Lipschitz-in-r at the empirical level: 0 <= D_{r1} - D_{r2} <= 2 C(sigma, 2 r1) (r2 - r1).
BoundReport lipschitz_in_r_check(const EmpiricalMeasure& mu0, const EmpiricalMeasure& mu1, double r1, double r2,
                                 double sigma);

}  // namespace parset::rr
