#include "parset/entropy.hpp"

#include "parset/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace parset::entropy {

namespace {

constexpr double kMergeTolerance = 1e-12;

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw std::invalid_argument("entropy: dimension mismatch");
}

// Atom index drawn by inverse CDF; uses one uniform from rng.
Eigen::Index pick_atom(const Eigen::VectorXd& cumulative, CounterRng& rng) {
  const double u = rng.uniform() * cumulative[cumulative.size() - 1];
  Eigen::Index k = 0;
  while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
  return k;
}

Eigen::VectorXd cumulative_weights(const Eigen::VectorXd& w) {
  Eigen::VectorXd c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  return c;
}

double upper_normal_tail(double s) { return 0.5 * std::erfc(s / std::sqrt(2.0)); }

}  // namespace

GaussianMixture::GaussianMixture(Eigen::MatrixXd atoms, Eigen::VectorXd weights, double variance)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), variance_(variance) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1) throw std::invalid_argument("GaussianMixture: need at least one atom");
  if (weights_.size() != atoms_.cols()) throw std::invalid_argument("GaussianMixture: one weight per atom required");
  if (!(weights_.array() > 0.0).all()) throw std::invalid_argument("GaussianMixture: weights must be positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw std::invalid_argument("GaussianMixture: weights must sum to 1");
  if (!(variance_ > 0.0) || !std::isfinite(variance_)) throw std::invalid_argument("GaussianMixture: variance must be positive");
  if (!atoms_.allFinite()) throw std::invalid_argument("GaussianMixture: atoms must be finite");
}

GaussianMixture GaussianMixture::single(const Eigen::VectorXd& atom, double variance) {
  return {atom, Eigen::VectorXd::Ones(1), variance};
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Analytic: return "analytic";
    case Method::MonteCarlo: return "mc";
    case Method::Quadrature: return "quadrature";
  }
  return "?";
}

double mixture_log_density(const GaussianMixture& gm, const Eigen::Ref<const Eigen::VectorXd>& x) {
  require_same_dim(gm.dim(), x.size());
  const double r = gm.variance();
  Eigen::VectorXd terms(gm.size());
  for (Eigen::Index i = 0; i < gm.size(); ++i) {
    terms[i] = std::log(gm.weights()[i]) - (x - gm.atoms().col(i)).squaredNorm() / (2.0 * r);
  }
  return log_sum_exp(terms) - 0.5 * static_cast<double>(gm.dim()) * std::log(2.0 * M_PI * r);
}

double mixture_density(const GaussianMixture& gm, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::exp(mixture_log_density(gm, x));
}

Eigen::VectorXd mixture_score(const GaussianMixture& gm, const Eigen::Ref<const Eigen::VectorXd>& x) {
  require_same_dim(gm.dim(), x.size());
  const double r = gm.variance();
  Eigen::VectorXd logits(gm.size());
  for (Eigen::Index i = 0; i < gm.size(); ++i) {
    logits[i] = std::log(gm.weights()[i]) - (x - gm.atoms().col(i)).squaredNorm() / (2.0 * r);
  }
  const Eigen::VectorXd resp = (logits.array() - log_sum_exp(logits)).exp().matrix();
  return (gm.atoms() * resp - x * resp.sum()) / r;
}

GaussianMixture convolve_mixtures(const GaussianMixture& x, const GaussianMixture& y) {
  require_same_dim(x.dim(), y.dim());
  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> weights;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      const Eigen::VectorXd s = x.atoms().col(i) + y.atoms().col(j);
      const double w = x.weights()[i] * y.weights()[j];
      auto it = std::find_if(atoms.begin(), atoms.end(), [&](const Eigen::VectorXd& a) {
        return (a - s).lpNorm<Eigen::Infinity>() <= kMergeTolerance;
      });
      if (it == atoms.end()) {
        atoms.push_back(s);
        weights.push_back(w);
      } else {
        weights[static_cast<std::size_t>(it - atoms.begin())] += w;
      }
    }
  }
  Eigen::MatrixXd a(x.dim(), static_cast<Eigen::Index>(atoms.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    a.col(static_cast<Eigen::Index>(k)) = atoms[k];
    w[static_cast<Eigen::Index>(k)] = weights[k];
  }
  w /= w.sum();
  return {std::move(a), std::move(w), x.variance() + y.variance()};
}

EntropyEstimate entropy_mc(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed, unsigned workers) {
  if (n < 2) throw std::invalid_argument("entropy_mc: need at least two samples");
  const Eigen::VectorXd cumulative = cumulative_weights(gm.weights());
  const double sd = std::sqrt(gm.variance());
  const auto acc = parallel_reduce_blocks<MomentAccumulator>(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
    MomentAccumulator local;
    Eigen::VectorXd z(gm.dim());
    for (std::uint64_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      const auto atom = pick_atom(cumulative, rng);
      rng.fill_normal(z);
      local.add(-mixture_log_density(gm, gm.atoms().col(atom) + sd * z));
    }
    return local;
  });
  return {acc.mean, acc.std_error(), Method::MonteCarlo, 0.0, n};
}

EntropyEstimate entropy_quadrature(const GaussianMixture& gm, double span, int points_per_sigma) {
  if (gm.dim() != 1) throw std::invalid_argument("entropy_quadrature: one-dimensional mixtures only");
  if (!(span > 0.0) || points_per_sigma < 2) throw std::invalid_argument("entropy_quadrature: bad span or resolution");
  const double s = std::sqrt(gm.variance());

  std::vector<double> centers(gm.atoms().data(), gm.atoms().data() + gm.size());
  std::sort(centers.begin(), centers.end());
  std::vector<std::pair<double, double>> intervals;
  for (double c : centers) {
    const double lo = c - span * s, hi = c + span * s;
    if (!intervals.empty() && lo <= intervals.back().second) {
      intervals.back().second = std::max(intervals.back().second, hi);
    } else {
      intervals.emplace_back(lo, hi);
    }
  }

  Eigen::VectorXd x(1);
  auto integrand = [&](double t) {
    x[0] = t;
    const double lp = mixture_log_density(gm, x);
    return -std::exp(lp) * lp;
  };
  double total = 0.0;
  for (const auto& [a, b] : intervals) {
    auto m = static_cast<long>(std::ceil((b - a) / s * points_per_sigma));
    m += m % 2;
    const double h = (b - a) / static_cast<double>(m);
    double acc = integrand(a) + integrand(b);
    for (long k = 1; k < m; ++k) acc += (k % 2 ? 4.0 : 2.0) * integrand(a + h * static_cast<double>(k));
    total += acc * h / 3.0;
  }

  // Outside every interval each component is at least `span` deviations away;
  // -p log p there is bounded by the Gaussian tail of z^2/2 + |log normaliser|.
  const double tail = 2.0 * upper_normal_tail(span);
  const double phi = std::exp(-0.5 * span * span) / std::sqrt(2.0 * M_PI);
  const double log_scale = std::abs(0.5 * std::log(2.0 * M_PI * gm.variance())) - std::log(gm.weights().minCoeff());
  const double truncation = (span * phi + tail) + log_scale * tail;
  return {total, 0.0, Method::Quadrature, truncation, 0};
}

EntropyEstimate entropy_auto(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed, unsigned workers) {
  if (gm.size() == 1) {
    const double d = static_cast<double>(gm.dim());
    return {0.5 * d * std::log(2.0 * M_PI * M_E * gm.variance()), 0.0, Method::Analytic, 0.0, 0};
  }
  if (gm.dim() == 1) return entropy_quadrature(gm);
  return entropy_mc(gm, n, seed, workers);
}

ReverseEpiResult reverse_epi_check(const DiscreteLaw& x, const DiscreteLaw& y, double r, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers) {
  if (!(r > 0.0)) throw std::invalid_argument("reverse_epi_check: smoothing r must be positive");
  const GaussianMixture gx(x.atoms, x.weights, r);
  const GaussianMixture gy(y.atoms, y.weights, r);
  require_same_dim(gx.dim(), gy.dim());
  const GaussianMixture gs = convolve_mixtures(gx, gy);
  const int d = static_cast<int>(gx.dim());

  ReverseEpiResult out;
  out.h_x = entropy_auto(gx, n, derive_seed(seed, 1), workers);
  out.h_y = entropy_auto(gy, n, derive_seed(seed, 2), workers);
  out.h_sum = entropy_auto(gs, n, derive_seed(seed, 3), workers);
  out.constant = bounds::reverse_epi_constant(d, r);
  const double se = std::sqrt(out.h_x.std_error * out.h_x.std_error + out.h_y.std_error * out.h_y.std_error +
                              out.h_sum.std_error * out.h_sum.std_error);
  const double truncation = out.h_x.truncation_error + out.h_y.truncation_error + out.h_sum.truncation_error;
  const bool deterministic = se == 0.0;
  out.report = compare_upper("reverse_epi", out.h_x.value + out.h_y.value + out.constant, out.h_sum.value, se,
                             deterministic ? 1e-6 + truncation : truncation);
  return out;
}

double pointwise_log_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double r) {
  require_same_dim(a.size(), b.size());
  if (!(r > 0.0)) throw std::invalid_argument("pointwise_log_ratio: r must be positive");
  const double d = static_cast<double>(a.size());
  auto log_g = [d](const Eigen::VectorXd& v, double var) {
    return -0.5 * d * std::log(2.0 * M_PI * var) - v.squaredNorm() / (2.0 * var);
  };
  return log_g(a + b, 2.0 * r) - log_g(a, r) - log_g(b, r);
}

bool pointwise_lemma_check(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double r) {
  const double lhs = pointwise_log_ratio(a, b, r);
  const double rhs = -bounds::reverse_epi_constant(static_cast<int>(a.size()), r);
  const double scale = std::max({1.0, std::abs(lhs), (a.squaredNorm() + b.squaredNorm()) / r});
  return lhs >= rhs - 1e-12 * scale;
}

EntropyEstimate fisher_information_mc(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed,
                                      unsigned workers) {
  if (n < 2) throw std::invalid_argument("fisher_information_mc: need at least two samples");
  const Eigen::VectorXd cumulative = cumulative_weights(gm.weights());
  const double sd = std::sqrt(gm.variance());
  const auto acc = parallel_reduce_blocks<MomentAccumulator>(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
    MomentAccumulator local;
    Eigen::VectorXd z(gm.dim());
    for (std::uint64_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      const auto atom = pick_atom(cumulative, rng);
      rng.fill_normal(z);
      local.add(mixture_score(gm, gm.atoms().col(atom) + sd * z).squaredNorm());
    }
    return local;
  });
  return {acc.mean, acc.std_error(), Method::MonteCarlo, 0.0, n};
}

BoundReport fisher_bound_check(const GaussianMixture& gm, std::uint64_t n, std::uint64_t seed, unsigned workers) {
  const auto j = fisher_information_mc(gm, n, seed, workers);
  return compare_upper("fisher_bound", static_cast<double>(gm.dim()) / gm.variance(), j.value, j.std_error);
}

BoundReport de_bruijn_check(const GaussianMixture& gm, double dt, std::uint64_t n, std::uint64_t seed,
                            unsigned workers) {
  const double t0 = gm.variance();
  if (!(dt > 0.0 && dt < t0)) throw std::invalid_argument("de_bruijn_check: requires 0 < dt < variance");
  if (n < 2) throw std::invalid_argument("de_bruijn_check: need at least two samples");
  const GaussianMixture plus(gm.atoms(), gm.weights(), t0 + dt);
  const GaussianMixture minus(gm.atoms(), gm.weights(), t0 - dt);
  const Eigen::VectorXd cumulative = cumulative_weights(gm.weights());

  struct Pair {
    MomentAccumulator diff;
    MomentAccumulator fisher;
    void merge(const Pair& o) {
      diff.merge(o.diff);
      fisher.merge(o.fisher);
    }
  };
  const auto acc = parallel_reduce_blocks<Pair>(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
    Pair local;
    Eigen::VectorXd z(gm.dim());
    for (std::uint64_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      const auto atom = pick_atom(cumulative, rng);
      rng.fill_normal(z);
      const auto mu = gm.atoms().col(atom);
      const double hp = -mixture_log_density(plus, mu + std::sqrt(t0 + dt) * z);
      const double hm = -mixture_log_density(minus, mu + std::sqrt(t0 - dt) * z);
      local.diff.add((hp - hm) / (2.0 * dt));
      local.fisher.add(0.5 * mixture_score(gm, mu + std::sqrt(t0) * z).squaredNorm());
    }
    return local;
  });
  const double se = std::hypot(acc.diff.std_error(), acc.fisher.std_error());
  // Central-difference bias is dt^2 h'''/6; h''' of a Gaussian is d/t^3.
  const double allowance = static_cast<double>(gm.dim()) * dt * dt / (t0 * t0 * t0);
  return compare_equal("de_bruijn", acc.fisher.mean, acc.diff.mean, se, allowance);
}

}  // namespace parset::entropy
