#pragma once

#include "parset/bounds.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace parset::entropy {

/// sum_i w_i N(x_i, variance I); atoms are columns.
class GaussianMixture {
 public:
  GaussianMixture(Eigen::MatrixXd atoms, Eigen::VectorXd weights, double variance);
  static GaussianMixture single(const Eigen::VectorXd& atom, double variance);

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double variance() const { return variance_; }
  Eigen::Index dim() const { return atoms_.rows(); }
  Eigen::Index size() const { return atoms_.cols(); }

 private:
  Eigen::MatrixXd atoms_;
  Eigen::VectorXd weights_;
  double variance_;
};

enum class Method { Analytic, MonteCarlo, Quadrature };
std::string to_string(Method m);

struct EntropyEstimate {
  double value = 0.0;  // nats (or J for Fisher information)
  double std_error = 0.0;
  Method method = Method::MonteCarlo;
  double truncation_error = 0.0;  // quadrature tails only
  std::uint64_t samples = 0;
};

double mixture_log_density(const GaussianMixture& gm, const Eigen::Ref<const Eigen::VectorXd>& x);
double mixture_density(const GaussianMixture& gm, const Eigen::Ref<const Eigen::VectorXd>& x);
/// Gradient of log p at x.
Eigen::VectorXd mixture_score(const GaussianMixture& gm, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Law of X + Y for independent mixtures: atoms x_i + y_j, weights p_i q_j,
/// variances added. Atoms within 1e-12 (max-norm) are merged.
GaussianMixture convolve_mixtures(const GaussianMixture& x, const GaussianMixture& y);

/// Mean of -log p(X) over n draws.
EntropyEstimate entropy_mc(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

/// Composite Simpson of -p log p on the union of [x_i - span s, x_i + span s]
/// (s = sqrt(variance)) with `points_per_sigma` nodes per s. One dimension only.
EntropyEstimate entropy_quadrature(const GaussianMixture& gm, double span = 12.0, int points_per_sigma = 64);

/// Analytic for a single atom, quadrature in one dimension, Monte Carlo otherwise.
EntropyEstimate entropy_auto(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

/// Discrete law sum_i w_i delta_{x_i}; smoothing adds N(0, r I).
struct DiscreteLaw {
  Eigen::MatrixXd atoms;
  Eigen::VectorXd weights;
};

struct ReverseEpiResult {
  EntropyEstimate h_x;
  EntropyEstimate h_y;
  EntropyEstimate h_sum;
  double constant = 0.0;
  BoundReport report;  // h_sum <= h_x + h_y + constant
};

/// h(X_r + Y_r) <= h(X_r) + h(Y_r) - (d/2) ln(pi r). Quadrature tolerance
/// 1e-6 in one dimension; four combined standard errors otherwise.
ReverseEpiResult reverse_epi_check(const DiscreteLaw& x, const DiscreteLaw& y, double r, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers = 1);

/// ln( g_{2r}(a+b) / (g_r(a) g_r(b)) ).
double pointwise_log_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double r);
/// The log ratio is at least (d/2) ln(pi r), up to 1e-12 relative rounding.
bool pointwise_lemma_check(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double r);

/// E |grad log p(X)|^2.
EntropyEstimate fisher_information_mc(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed,
                                      unsigned workers = 1);
/// J <= d / variance.
BoundReport fisher_bound_check(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

/// Central difference of t -> h(X + sqrt(t) Z) at t0 = gm.variance() against J/2.
/// Both entropies share atom draws and normal variates.
BoundReport de_bruijn_check(const GaussianMixture& gm, double dt, std::uint64_t n, std::uint64_t seed,
                            unsigned workers = 1);

}  // namespace parset::entropy
