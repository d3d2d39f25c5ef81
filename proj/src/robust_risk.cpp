#include "parset/robust_risk.hpp"

#include "parset/matching.hpp"
#include "parset/random.hpp"
#include "parset/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace parset::rr {

EmpiricalMeasure::EmpiricalMeasure(PointSet points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (weights_.size() != points_.size()) throw std::invalid_argument("EmpiricalMeasure: one weight per point required");
  if (!(weights_.array() > 0.0).all()) throw std::invalid_argument("EmpiricalMeasure: weights must be positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw std::invalid_argument("EmpiricalMeasure: weights must sum to 1");
}

EmpiricalMeasure EmpiricalMeasure::uniform(PointSet points) {
  const auto n = points.size();
  return {std::move(points), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))};
}

namespace {

void require_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("D_r: radius must be nonnegative");
}

void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw std::invalid_argument("measures live in different dimensions");
}

// Ties at exactly 2r are matchable: the cost is 1{d > 2r}.
bool within(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b, double reach_sq) {
  return (a - b).squaredNorm() <= reach_sq;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TransportResult d_r_uniform(const PointSet& x, const PointSet& y, double r) {
  require_radius(r);
  require_same_dim(x.dim(), y.dim());
  if (x.size() != y.size()) throw std::invalid_argument("d_r_uniform: point sets must have equal size");
  const int n = static_cast<int>(x.size());
  if (n == 0) throw std::invalid_argument("d_r_uniform: empty point sets");
  const double reach_sq = 4.0 * r * r;

  std::vector<std::vector<int>> adjacency(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (within(x.point(i), y.point(j), reach_sq)) adjacency[i].push_back(j);
    }
  }
  const auto m = hopcroft_karp(adjacency, n);
  TransportResult out;
  out.threshold_r = r;
  out.value = 1.0 - static_cast<double>(m.size) / n;
  for (int i = 0; i < n; ++i) {
    if (m.match_left[i] >= 0) out.certificate.push_back({i, m.match_left[i], 1.0 / n});
  }
  return out;
}

TransportResult d_r_weighted(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r) {
  require_radius(r);
  require_same_dim(mu.dim(), nu.dim());
  const int n = static_cast<int>(mu.size()), m = static_cast<int>(nu.size());
  const int source = 0, sink = n + m + 1;
  const double reach_sq = 4.0 * r * r;

  MaxFlow flow(n + m + 2);
  for (int i = 0; i < n; ++i) flow.add_edge(source, 1 + i, mu.weights()[i]);
  for (int j = 0; j < m; ++j) flow.add_edge(1 + n + j, sink, nu.weights()[j]);
  struct Link {
    int i, j, id;
  };
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (within(mu.points().point(i), nu.points().point(j), reach_sq)) {
        links.push_back({i, j, flow.add_edge(1 + i, 1 + n + j, 2.0)});
      }
    }
  }
  const double matched = flow.solve(source, sink);
  TransportResult out;
  out.threshold_r = r;
  out.value = std::clamp(1.0 - matched, 0.0, 1.0);
  for (const auto& l : links) {
    const double f = flow.flow_on(l.id);
    if (f > 0.0) out.certificate.push_back({l.i, l.j, f});
  }
  return out;
}

TransportResult w1_empirical(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  require_same_dim(mu.dim(), nu.dim());
  if (mu.size() > kMaxW1Atoms || nu.size() > kMaxW1Atoms) {
    throw std::invalid_argument("w1_empirical: at most " + std::to_string(kMaxW1Atoms) +
                                " atoms per measure; subsample, or use w1_sorted_1d in one dimension");
  }
  Eigen::MatrixXd cost(mu.size(), nu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    for (Eigen::Index j = 0; j < nu.size(); ++j) cost(i, j) = (mu.points().point(i) - nu.points().point(j)).norm();
  }
  const auto sol = solve_transport(cost, mu.weights(), nu.weights());
  TransportResult out;
  out.value = sol.cost;
  for (const auto& e : sol.plan) out.certificate.push_back({e.source, e.target, e.mass});
  return out;
}

double w1_sorted_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw std::invalid_argument("w1_sorted_1d: measures must be one-dimensional");
  struct Atom {
    double x;
    double signed_mass;
  };
  std::vector<Atom> atoms;
  for (Eigen::Index i = 0; i < mu.size(); ++i) atoms.push_back({mu.points().coords()(0, i), mu.weights()[i]});
  for (Eigen::Index j = 0; j < nu.size(); ++j) atoms.push_back({nu.points().coords()(0, j), -nu.weights()[j]});
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  double cdf_gap = 0.0, total = 0.0;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    cdf_gap += atoms[k].signed_mass;
    total += std::abs(cdf_gap) * (atoms[k + 1].x - atoms[k].x);
  }
  return total;
}

BoundReport check_w1_domination(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("check_w1_domination: r must be positive");
  const double dr = d_r_weighted(mu, nu, r).value;
  const double w1 = w1_empirical(mu, nu).value;
  return compare_upper("w1_domination", w1 / (2.0 * r), dr, 0.0, 1e-12);
}

double robust_risk(double d_r_value) {
  if (!(d_r_value >= 0.0 && d_r_value <= 1.0)) throw std::invalid_argument("robust_risk: D_r must lie in [0, 1]");
  return 0.5 * (1.0 - d_r_value);
}

double decision_region_risk(const Region& region, const PointSet& mu0_samples, const PointSet& mu1_samples, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("decision_region_risk: r must be nonnegative");
  if (std::holds_alternative<ParallelSetSpec>(region)) {
    throw std::invalid_argument("decision_region_risk: unsupported region type (union of balls has no exact erosion)");
  }
  std::size_t in0 = 0, in1 = 0;
  for (Eigen::Index i = 0; i < mu0_samples.size(); ++i) in0 += region_contains(region, mu0_samples.point(i), r);
  for (Eigen::Index i = 0; i < mu1_samples.size(); ++i) in1 += complement_dilation_contains(region, mu1_samples.point(i), r);
  return 0.5 * (static_cast<double>(in0) / static_cast<double>(mu0_samples.size()) +
                static_cast<double>(in1) / static_cast<double>(mu1_samples.size()));
}

PointSet gaussian_smooth(const PointSet& samples, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_smooth: sigma must be nonnegative");
  if (sigma == 0.0) return samples;
  Eigen::MatrixXd out = samples.coords();
  Eigen::VectorXd z(samples.dim());
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    rng.fill_normal(z);
    out.col(i) += sigma * z;
  }
  return PointSet(std::move(out));
}

BoundReport coupling_sandwich_check(const EmpiricalMeasure& mu0, const EmpiricalMeasure& mu1,
                                    const EmpiricalMeasure& mu0n, const EmpiricalMeasure& mu1n, double r, double eta) {
  if (!(eta > 0.0 && eta < r / 3.0)) throw std::invalid_argument("coupling_sandwich_check: requires 0 < eta < r/3");
  const double d_plus = d_r_weighted(mu0, mu1, r + 2.0 * eta).value;
  const double d_minus = d_r_weighted(mu0, mu1, r - 2.0 * eta).value;
  const double d_emp = d_r_weighted(mu0n, mu1n, r).value;
  const double d0 = d_r_weighted(mu0, mu0n, eta).value;
  const double d1 = d_r_weighted(mu1, mu1n, eta).value;
  const auto upper = compare_upper("coupling_sandwich_upper", d_emp + d0 + d1, d_plus, 0.0, 1e-12);
  const auto lower = compare_lower("coupling_sandwich_lower", d_emp - d0 - d1, d_minus, 0.0, 1e-12);
  return all_of("coupling_sandwich", {upper, lower});
}

Eigen::Index spec_dim(const DistributionSpec& spec) {
  if (const auto* g = std::get_if<GaussianMixtureGen>(&spec)) return g->atoms.rows();
  return std::get<UniformBallGen>(spec).center.size();
}

PointSet draw_samples(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("draw_samples: n must be positive");
  const auto d = spec_dim(spec);
  Eigen::MatrixXd out(d, static_cast<Eigen::Index>(n));
  Eigen::VectorXd z(d);
  if (const auto* g = std::get_if<GaussianMixtureGen>(&spec)) {
    if (g->atoms.cols() != g->weights.size() || g->atoms.cols() == 0) {
      throw std::invalid_argument("gaussian-mixture generator: one weight per atom required");
    }
    Eigen::VectorXd cumulative(g->weights.size());
    std::partial_sum(g->weights.begin(), g->weights.end(), cumulative.begin());
    for (std::size_t k = 0; k < n; ++k) {
      CounterRng rng(seed, k);
      const double u = rng.uniform() * cumulative[cumulative.size() - 1];
      Eigen::Index atom = 0;
      while (atom + 1 < cumulative.size() && u >= cumulative[atom]) ++atom;
      rng.fill_normal(z);
      out.col(static_cast<Eigen::Index>(k)) = g->atoms.col(atom) + g->sigma * z;
    }
  } else {
    const auto& b = std::get<UniformBallGen>(spec);
    for (std::size_t k = 0; k < n; ++k) {
      CounterRng rng(seed, k);
      rng.fill_direction(z);
      out.col(static_cast<Eigen::Index>(k)) = b.center + b.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) * z;
    }
  }
  return PointSet(std::move(out));
}

namespace {

double smoothed_d_r(const ConvergenceConfig& cfg, std::size_t n, std::uint64_t stream_seed) {
  const auto x = gaussian_smooth(draw_samples(cfg.gen0, n, derive_seed(stream_seed, 1)), cfg.sigma, derive_seed(stream_seed, 3));
  const auto y = gaussian_smooth(draw_samples(cfg.gen1, n, derive_seed(stream_seed, 2)), cfg.sigma, derive_seed(stream_seed, 4));
  return d_r_uniform(x, y, cfg.r).value;
}

}  // namespace

ConvergenceResult convergence_experiment(const ConvergenceConfig& cfg) {
  if (cfg.n_grid.empty()) throw std::invalid_argument("convergence_experiment: empty n grid");
  if (cfg.trials < 1) throw std::invalid_argument("convergence_experiment: trials must be >= 1");
  if (spec_dim(cfg.gen0) != spec_dim(cfg.gen1)) throw std::invalid_argument("convergence_experiment: generator dimensions differ");

  ConvergenceResult out;
  out.reference_n = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end()) * cfg.ref_multiplier;
  out.reference_d_r = smoothed_d_r(cfg, out.reference_n, derive_seed(cfg.seed, 0xEEF));

  struct Job {
    std::size_t n;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t n : cfg.n_grid) {
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({n, t});
  }
  std::vector<double> values(jobs.size());
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < jobs.size(); k += stride) {
      const auto seed = derive_seed(derive_seed(cfg.seed, jobs[k].n), static_cast<std::uint64_t>(jobs[k].trial));
      values[k] = smoothed_d_r(cfg, jobs[k].n, seed);
    }
  };
  const unsigned workers = std::max(1u, cfg.workers);
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    out.rows.push_back({jobs[k].n, jobs[k].trial, values[k], std::abs(values[k] - out.reference_d_r)});
  }
  for (std::size_t n : cfg.n_grid) {
    std::vector<double> devs;
    for (const auto& row : out.rows) {
      if (row.n == n) devs.push_back(row.abs_dev);
    }
    out.summary.push_back({n, quantile(devs, 0.1), quantile(devs, 0.5), quantile(devs, 0.9)});
  }
  return out;
}

int median_inversions(const ConvergenceResult& result) {
  int inversions = 0;
  for (std::size_t k = 1; k < result.summary.size(); ++k) {
    if (result.summary[k].median > result.summary[k - 1].median) ++inversions;
  }
  return inversions;
}

BoundReport lipschitz_in_r_check(const EmpiricalMeasure& mu0, const EmpiricalMeasure& mu1, double r1, double r2,
                                 double sigma) {
  if (!(r1 > 0.0 && r1 < r2)) throw std::invalid_argument("lipschitz_in_r_check: requires 0 < r1 < r2");
  const double gap = d_r_weighted(mu0, mu1, r1).value - d_r_weighted(mu0, mu1, r2).value;
  const int d = static_cast<int>(mu0.dim());
  const double bound = 2.0 * bounds::gaussian_surface_bound(d, 2.0 * r1, sigma) * (r2 - r1);
  const auto upper = compare_upper("lipschitz_upper", bound, gap, 0.0, 1e-12);
  const auto lower = compare_lower("lipschitz_monotone", 0.0, gap, 0.0, 1e-12);
  return all_of("lipschitz_in_r", {upper, lower});
}

}  // namespace parset::rr
