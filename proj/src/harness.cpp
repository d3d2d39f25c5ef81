#include "parset/harness.hpp"

#include "parset/core.hpp"
#include "parset/entropy.hpp"
#include "parset/exact2d.hpp"
#include "parset/mc_measure.hpp"
#include "parset/pointset_io.hpp"
#include "parset/random.hpp"
#include "parset/robust_risk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#ifndef PARSET_VERSION
#define PARSET_VERSION "0.0.0"
#endif

namespace parset::harness {

using nlohmann::json;
using nlohmann::ordered_json;

std::string tool_version() { return PARSET_VERSION; }

namespace {

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Random instance generator; one per (check, instance) pair.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::string_view check, std::uint64_t instance)
      : rng_(derive_seed(seed, fnv1a(check)), instance) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_.uniform() * (hi - lo + 1)); }
  std::uint64_t seed() { return rng_.next_u64(); }

  Eigen::VectorXd in_cube(const Eigen::VectorXd& center, double radius) {
    Eigen::VectorXd u(center.size());
    rng_.fill_uniform(u);
    return center + radius * (2.0 * u.array() - 1.0).matrix();
  }

  Eigen::VectorXd in_ball(const Eigen::VectorXd& center, double radius) {
    Eigen::VectorXd v(center.size());
    rng_.fill_direction(v);
    return center + radius * std::pow(rng_.uniform(), 1.0 / static_cast<double>(center.size())) * v;
  }

  PointSet cloud(int count, const Eigen::VectorXd& center, double radius, bool ball) {
    Eigen::MatrixXd m(center.size(), count);
    for (int i = 0; i < count; ++i) m.col(i) = ball ? in_ball(center, radius) : in_cube(center, radius);
    return PointSet(std::move(m));
  }

  Eigen::VectorXd simplex_weights(int count) {
    Eigen::VectorXd w(count);
    for (int i = 0; i < count; ++i) w[i] = 0.1 + rng_.uniform();
    return w / w.sum();
  }

 private:
  CounterRng rng_;
};

using Rows = std::vector<CheckRow>;

mc::McConfig mc_config(std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  mc::McConfig c;
  c.samples = samples;
  c.seed = seed;
  c.workers = workers;
  return c;
}

double line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1.0 + static_cast<double>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::string key_location(const std::string& text, const std::string& source, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return source;
  return source + ":" + std::to_string(static_cast<long>(line_of_offset(text, pos)));
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(static_cast<long>(line_of_offset(text, e.byte))) +
                      ": invalid JSON: " + e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& text,
                         const std::string& source, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(source + ": " + where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(key_location(text, source, key) + ": unknown key \"" + key + "\" in " + where +
                        " (allowed: " + list + ")");
    }
  }
}

// ---------------------------------------------------------------- euclidean

void suite_euclidean(const SuiteConfig& cfg, Rows& out) {
  const std::string s = "euclidean";
  const Eigen::VectorXd origin2 = Eigen::VectorXd::Zero(2);
  const double h = std::sqrt(3.0) / 2.0;

  const auto four = PointSet::from_rows({{0.0, 0.0}, {1.0, 0.0}, {-0.5, h}, {-0.5, -h}});
  out.push_back({s, compare_equal("b_puzzle_equality", bounds::union_in_ball(2, 1.0),
                                  exact2d::disk_union_perimeter(four, 1.0), 0.0, 1e-9)});

  std::vector<BoundReport> parts;
  for (int i = 0; i < 1000; ++i) {
    Sampler g(cfg.seed, "b_puzzle_random", i);
    const auto x0 = g.in_cube(origin2, 5.0);
    const auto pts = g.cloud(g.integer(1, 50), x0, 1.0, true);
    parts.push_back(compare_upper("b_puzzle", bounds::union_in_ball(2, 1.0), exact2d::disk_union_perimeter(pts, 1.0),
                                  0.0, 1e-9));
  }
  out.push_back({s, all_of("b_puzzle_random", parts)});

  parts.clear();
  for (int i = 0; i < 1000; ++i) {
    Sampler g(cfg.seed, "c_puzzle_random", i);
    const auto x0 = g.in_cube(origin2, 5.0);
    const auto pts = g.cloud(g.integer(1, 50), x0, 1.0, false);
    parts.push_back(compare_upper("c_puzzle", bounds::union_in_cube(2, 1.0),
                                  exact2d::square_union_perimeter(pts, 1.0), 0.0, 1e-9));
  }
  out.push_back({s, all_of("c_puzzle_random", parts)});

  parts.clear();
  for (int i = 0; i < 100; ++i) {
    Sampler g(cfg.seed, "volume_constrained_2d", i);
    const double r = g.uniform(0.1, 1.0);
    const auto pts = g.cloud(g.integer(1, 12), origin2, 2.0, false);
    const auto boundary = exact2d::disk_union_boundary(pts, r);
    parts.push_back(compare_upper("volume_constrained_2d",
                                  bounds::volume_constrained(2, r, exact2d::disk_union_area(boundary)),
                                  exact2d::disk_union_perimeter(boundary)));
  }
  out.push_back({s, all_of("volume_constrained_2d", parts)});

  parts.clear();
  const Eigen::VectorXd origin3 = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "volume_constrained_3d", i);
    const double r = g.uniform(0.2, 1.0);
    const ParallelSetSpec spec(g.cloud(g.integer(1, 8), origin3, 1.5, false), NormKind::L2, r);
    const auto vol = mc::mc_volume(spec, mc_config(cfg.samples, g.seed(), cfg.workers));
    const auto shell = mc::mc_shell_lebesgue(spec, mc_config(cfg.samples, g.seed(), cfg.workers));
    const double bound = bounds::volume_constrained(3, r, vol.value);
    const double bound_se = bounds::volume_constrained(3, r, vol.std_error);
    parts.push_back(compare_upper("volume_constrained_3d", bound, shell.value, std::hypot(shell.std_error, bound_se)));
  }
  out.push_back({s, all_of("volume_constrained_3d", parts)});

  parts.clear();
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "kneser_shell", i);
    const int d = 2 + i % 2;
    const NormKind norm = (i / 2) % 2 ? NormKind::Linf : NormKind::L2;
    const auto pts = g.cloud(g.integer(1, 6), Eigen::VectorXd::Zero(d), 1.0, false);
    const double a = g.uniform(0.1, 0.5);
    const double b = a + g.uniform(0.05, 0.5);
    const auto seed = g.seed();
    for (double t : {1.2, 1.5, 2.0}) {
      parts.push_back(mc::kneser_shell_check(pts, norm, a, b, t, mc_config(cfg.samples, seed, cfg.workers)));
    }
  }
  out.push_back({s, all_of("kneser_shell", parts)});

  {
    const double alpha = M_PI / 3.0;
    Sampler g(cfg.seed, "inscribed_angle_2d", 0);
    const Eigen::Vector2d apex(-1.0, 0.0), axis(1.0, 0.0);
    const auto est = mc::solid_angle_fraction(apex, origin2, 1.0, axis, alpha, cfg.samples, g.seed(), cfg.workers);
    const double center = mc::cap_fraction(2, alpha);
    out.push_back({s, compare_equal("inscribed_angle_2d_ratio", 0.5, est.value / center, est.std_error / center,
                                    0.01)});
  }

  parts.clear();
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "inscribed_angle_3d", i);
    const double alpha = g.uniform(0.1, M_PI - 0.1);
    const auto res = mc::inscribed_angle_check(3, alpha, 1, g.seed(), std::min<std::uint64_t>(cfg.samples, 100'000),
                                               cfg.workers);
    parts.push_back(res.summary);
  }
  out.push_back({s, all_of("inscribed_angle_3d", parts)});
}

// ----------------------------------------------------------------- gaussian

void suite_gaussian(const SuiteConfig& cfg, Rows& out) {
  const std::string s = "gaussian";
  {
    Sampler g(cfg.seed, "halfspace_calibration", 0);
    auto mcfg = mc_config(cfg.calibration_samples, g.seed(), cfg.workers);
    mcfg.shell_delta = 1e-3;
    const HalfSpace half{Eigen::Vector2d(1.0, 0.0), 0.0};
    const auto est = mc::mc_gaussian_shell(half, mcfg, 1.0);
    out.push_back({s, compare_equal("halfspace_calibration", 1.0 / std::sqrt(2.0 * M_PI), est.value, est.std_error,
                                    1e-6)});
  }

  std::vector<BoundReport> parts;
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "gaussian_surface", i);
    const int d = 2 + i % 2;
    const double r = g.uniform(0.2, 1.0);
    const ParallelSetSpec spec(g.cloud(g.integer(1, 6), Eigen::VectorXd::Zero(d), 1.5, false), NormKind::L2, r);
    const auto est = mc::mc_gaussian_shell(spec, mc_config(cfg.samples, g.seed(), cfg.workers), 1.0);
    parts.push_back(compare_upper("gaussian_surface", bounds::gaussian_surface_bound(d, r, 1.0), est.value,
                                  est.std_error));
  }
  out.push_back({s, all_of("gaussian_surface_random", parts)});

  for (NormKind norm : {NormKind::L2, NormKind::Linf}) {
    parts.clear();
    for (int d = 1; d <= 50; ++d) {
      const auto c = bounds::gaussian_constant(d, norm);
      parts.push_back(compare_lower("sandwich_lower", c.lower_sandwich, c.constant_c));
      parts.push_back(compare_upper("sandwich_upper", c.upper_sandwich, c.constant_c));
    }
    out.push_back({s, all_of("gaussian_constant_sandwich_" + to_string(norm), parts)});
  }
}

// ---------------------------------------------------------- brunn-minkowski

void suite_brunn_minkowski(const SuiteConfig& cfg, Rows& out) {
  const std::string s = "brunn-minkowski";
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  std::vector<BoundReport> parts;
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "reverse_brunn_minkowski", i);
    const double r = g.uniform(0.1, 0.6);
    const auto k = g.cloud(g.integer(1, 5), origin, 1.0, false);
    const auto l = g.cloud(g.integer(1, 5), origin, 1.0, false);
    Eigen::MatrixXd sums(2, k.size() * l.size());
    for (Eigen::Index a = 0; a < k.size(); ++a) {
      for (Eigen::Index b = 0; b < l.size(); ++b) sums.col(a * l.size() + b) = k.point(a) + l.point(b);
    }
    // rB + rB = 2rB, so the sum of the parallel sets is the 2r-parallel set of the sumset.
    const ParallelSetSpec sum_spec(PointSet(std::move(sums)), NormKind::L2, 2.0 * r);
    const auto vol = mc::mc_volume(sum_spec, mc_config(cfg.samples, g.seed(), cfg.workers));
    const double bound = exact2d::disk_union_area(k, r) * exact2d::disk_union_area(l, r) *
                         bounds::reverse_bm_constant(2, r);
    parts.push_back(compare_upper("reverse_bm", bound, vol.value, vol.std_error));
  }
  out.push_back({s, all_of("reverse_brunn_minkowski", parts)});
}

// ---------------------------------------------------------------------- epi

entropy::DiscreteLaw law(Eigen::MatrixXd atoms, Eigen::VectorXd weights) { return {std::move(atoms), std::move(weights)}; }

void suite_epi(const SuiteConfig& cfg, Rows& out) {
  const std::string s = "epi";
  for (int d : {1, 3}) {
    const auto atom = law(Eigen::MatrixXd::Zero(d, 1), Eigen::VectorXd::Ones(1));
    const auto res = entropy::reverse_epi_check(atom, atom, 1.0, cfg.entropy_samples, cfg.seed, cfg.workers);
    out.push_back({s, all_of("reverse_epi_single_atom_d" + std::to_string(d),
                             {res.report, compare_equal("single_atom_gap", 0.5 * d, res.report.slack, 0.0, 1e-12)})});
  }

  std::vector<BoundReport> parts;
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "reverse_epi_random_1d", i);
    const int kx = g.integer(1, 4), ky = g.integer(1, 4);
    const auto x = law(g.cloud(kx, Eigen::VectorXd::Zero(1), 3.0, false).coords(), g.simplex_weights(kx));
    const auto y = law(g.cloud(ky, Eigen::VectorXd::Zero(1), 3.0, false).coords(), g.simplex_weights(ky));
    parts.push_back(entropy::reverse_epi_check(x, y, g.uniform(0.1, 2.0), cfg.entropy_samples, g.seed(), cfg.workers)
                        .report);
  }
  out.push_back({s, all_of("reverse_epi_random_1d", parts)});

  {
    const double r = 1.0;
    Eigen::MatrixXd xa(1, 2), ya(1, 2);
    xa << 0.0, 1000.0;
    ya << 0.0, 100000.0;
    const auto res = entropy::reverse_epi_check(law(xa, Eigen::Vector2d(0.5, 0.5)), law(ya, Eigen::Vector2d(0.5, 0.5)),
                                                r, cfg.entropy_samples, cfg.seed, cfg.workers);
    const double gap = res.h_sum.value - res.h_x.value - res.h_y.value;
    out.push_back({s, res.report});
    out.push_back({s, compare_equal("far_separated_gap", -0.5 * std::log(M_PI * M_E * r), gap, 0.0, 0.02)});
  }

  {
    int failures = 0;
    double worst_equality = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Sampler g(cfg.seed, "pointwise_lemma", i);
      const int d = g.integer(1, 3);
      const Eigen::VectorXd a = g.in_cube(Eigen::VectorXd::Zero(d), 3.0);
      const Eigen::VectorXd b = g.in_cube(Eigen::VectorXd::Zero(d), 3.0);
      const double r = g.uniform(0.05, 3.0);
      failures += !entropy::pointwise_lemma_check(a, b, r);
      worst_equality = std::max(worst_equality, std::abs(entropy::pointwise_log_ratio(a, a, r) +
                                                         bounds::reverse_epi_constant(d, r)));
    }
    out.push_back({s, compare_upper("pointwise_lemma_failures", 0.0, failures)});
    out.push_back({s, compare_equal("pointwise_lemma_equality_case", 0.0, worst_equality, 0.0, 1e-12)});
  }

  parts.clear();
  for (int i = 0; i < cfg.instances; ++i) {
    Sampler g(cfg.seed, "fisher_bound", i);
    const int d = 1 + i % 2, k = g.integer(1, 4);
    const entropy::GaussianMixture gm(g.cloud(k, Eigen::VectorXd::Zero(d), 2.0, false).coords(), g.simplex_weights(k),
                                      g.uniform(0.2, 2.0));
    parts.push_back(entropy::fisher_bound_check(gm, cfg.entropy_samples, g.seed(), cfg.workers));
  }
  out.push_back({s, all_of("fisher_bound", parts)});

  {
    Eigen::MatrixXd two(1, 2);
    two << -1.0, 1.0;
    const auto single = entropy::GaussianMixture::single(Eigen::VectorXd::Zero(1), 1.0);
    const entropy::GaussianMixture pair(two, Eigen::Vector2d(0.5, 0.5), 0.5);
    out.push_back({s, all_of("de_bruijn", {entropy::de_bruijn_check(single, 1e-3, cfg.entropy_samples, cfg.seed,
                                                                     cfg.workers),
                                           entropy::de_bruijn_check(pair, 1e-3, cfg.entropy_samples,
                                                                    derive_seed(cfg.seed, 1), cfg.workers)})});
  }

  {
    Eigen::MatrixXd atoms(1, 3);
    atoms << -1.5, 0.0, 2.0;
    const entropy::GaussianMixture gm(atoms, Eigen::Vector3d(0.2, 0.5, 0.3), 0.7);
    const auto quad = entropy::entropy_quadrature(gm);
    const auto mcest = entropy::entropy_mc(gm, cfg.entropy_samples, cfg.seed, cfg.workers);
    out.push_back({s, compare_equal("entropy_mc_vs_quadrature", quad.value, mcest.value, mcest.std_error,
                                    quad.truncation_error)});
  }
}

// -------------------------------------------------------------- robust-risk

double brute_force_d_r(const PointSet& x, const PointSet& y, double r) {
  std::vector<int> perm(static_cast<std::size_t>(x.size()));
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int matched = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      matched += (x.point(static_cast<Eigen::Index>(i)) - y.point(perm[i])).squaredNorm() <= 4.0 * r * r;
    }
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 1.0 - static_cast<double>(best) / static_cast<double>(x.size());
}

void suite_robust_risk(const SuiteConfig& cfg, Rows& out) {
  const std::string s = "robust-risk";
  int mismatches = 0, weighted_mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    Sampler g(cfg.seed, "dr_bruteforce", i);
    const int n = g.integer(1, 7), d = g.integer(1, 3);
    const auto x = g.cloud(n, Eigen::VectorXd::Zero(d), 1.0, false);
    const auto y = g.cloud(n, Eigen::VectorXd::Zero(d), 1.0, false);
    const double r = g.uniform(0.05, 0.8);
    const double fast = rr::d_r_uniform(x, y, r).value;
    mismatches += fast != brute_force_d_r(x, y, r);
    const double weighted =
        rr::d_r_weighted(rr::EmpiricalMeasure::uniform(x), rr::EmpiricalMeasure::uniform(y), r).value;
    weighted_mismatches += std::abs(weighted - fast) > 1e-12;
  }
  out.push_back({s, compare_upper("dr_bruteforce_mismatches", 0.0, mismatches)});
  out.push_back({s, compare_upper("dr_weighted_mismatches", 0.0, weighted_mismatches)});

  std::vector<BoundReport> parts;
  for (int i = 0; i < 100; ++i) {
    Sampler g(cfg.seed, "w1_domination", i);
    const int d = g.integer(1, 3), n = g.integer(1, 50), m = g.integer(1, 50);
    const rr::EmpiricalMeasure mu(g.cloud(n, Eigen::VectorXd::Zero(d), 1.0, false), g.simplex_weights(n));
    const rr::EmpiricalMeasure nu(g.cloud(m, Eigen::VectorXd::Constant(d, 0.3), 1.0, false), g.simplex_weights(m));
    parts.push_back(rr::check_w1_domination(mu, nu, g.uniform(0.02, 0.6)));
  }
  out.push_back({s, all_of("w1_domination", parts)});

  parts.clear();
  for (int i = 0; i < 100; ++i) {
    Sampler g(cfg.seed, "coupling_sandwich", i);
    const int d = g.integer(1, 3);
    const Eigen::VectorXd shift = Eigen::VectorXd::Constant(d, 0.5);
    auto measure = [&](const Eigen::VectorXd& c) {
      const int n = g.integer(1, 20);
      return rr::EmpiricalMeasure(g.cloud(n, c, 1.0, false), g.simplex_weights(n));
    };
    const auto mu0 = measure(Eigen::VectorXd::Zero(d)), mu1 = measure(shift);
    const auto mu0n = measure(Eigen::VectorXd::Zero(d)), mu1n = measure(shift);
    const double r = g.uniform(0.05, 0.6);
    const double eta = g.uniform(0.01, 0.99) * r / 3.0;
    parts.push_back(rr::coupling_sandwich_check(mu0, mu1, mu0n, mu1n, r, eta));
  }
  out.push_back({s, all_of("coupling_sandwich", parts)});

  if (cfg.convergence) {
    rr::ConvergenceConfig cc;
    cc.gen0 = rr::GaussianMixtureGen{Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Ones(1), 0.0};
    cc.gen1 = rr::GaussianMixtureGen{Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Ones(1), 0.0};
    cc.r = 0.1;
    cc.sigma = 0.2;
    cc.trials = cfg.convergence_trials;
    cc.seed = derive_seed(cfg.seed, fnv1a("convergence"));
    cc.workers = cfg.workers;
    const auto res = rr::convergence_experiment(cc);
    out.push_back({s, compare_upper("convergence_median_inversions", 1.0, rr::median_inversions(res))});
    auto final_median = compare_upper("convergence_final_median", 0.05, res.summary.back().median);
    if (!(final_median.slack > 0.0)) final_median.verdict = Verdict::Fail;  // strict
    out.push_back({s, final_median});
  }
}

using SuiteFn = void (*)(const SuiteConfig&, Rows&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table{
      {"euclidean", suite_euclidean},
      {"gaussian", suite_gaussian},
      {"brunn-minkowski", suite_brunn_minkowski},
      {"epi", suite_epi},
      {"robust-risk", suite_robust_risk},
  };
  return table;
}

// --------------------------------------------------------------- experiment

PointSet points_param(const json& p, const std::string& key) {
  if (!p.contains(key)) throw ConfigError("parameters: missing \"" + key + "\"");
  try {
    return PointSet::from_rows(p.at(key).get<std::vector<std::vector<double>>>());
  } catch (const json::exception& e) {
    throw ConfigError("parameters: \"" + key + "\" must be an array of coordinate arrays");
  }
}

template <typename T>
T param(const json& p, const std::string& key, std::optional<T> fallback = std::nullopt) {
  if (!p.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("parameters: missing \"" + key + "\"");
  }
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("parameters: \"" + key + "\" has the wrong type");
  }
}

const std::map<std::string, std::set<std::string>>& module_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"core-geometry", {"points", "radius", "norm"}},
      {"exact2d", {"centers", "radius", "shape"}},
      {"mc-measure", {"centers", "radius", "samples", "delta"}},
      {"bounds", {"dim", "norm"}},
      {"robust-risk", {"mu0", "mu1", "radius"}},
      {"entropy", {"x", "y", "x_weights", "y_weights", "smoothing", "samples"}},
  };
  return keys;
}

Eigen::VectorXd weights_param(const json& p, const std::string& key, Eigen::Index count) {
  if (!p.contains(key)) return Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  const auto w = param<std::vector<double>>(p, key);
  if (static_cast<Eigen::Index>(w.size()) != count) throw ConfigError("parameters: \"" + key + "\" needs one weight per atom");
  return Eigen::Map<const Eigen::VectorXd>(w.data(), count);
}

}  // namespace

// ------------------------------------------------------------------ public

bool RunManifest::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.report.verdict != Verdict::Fail; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : suite_table()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

SuiteConfig parse_suite_config(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  reject_unknown_keys(j,
                      {"seed", "workers", "samples", "instances", "calibration_samples", "entropy_samples",
                       "convergence_trials", "convergence"},
                      text, source, "suite config");
  SuiteConfig c;
  auto read = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw ConfigError(key_location(text, source, key) + ": \"" + key + "\" has the wrong type");
    }
  };
  read("seed", c.seed);
  read("workers", c.workers);
  read("samples", c.samples);
  read("instances", c.instances);
  read("calibration_samples", c.calibration_samples);
  read("entropy_samples", c.entropy_samples);
  read("convergence_trials", c.convergence_trials);
  read("convergence", c.convergence);
  if (c.samples < 2 || c.calibration_samples < 2 || c.entropy_samples < 2) {
    throw ConfigError(source + ": sample counts must be at least 2");
  }
  if (c.instances < 1 || c.convergence_trials < 1) throw ConfigError(source + ": instances and trials must be >= 1");
  return c;
}

ordered_json to_json(const SuiteConfig& c) {
  return {{"seed", c.seed},
          {"workers", c.workers},
          {"samples", c.samples},
          {"instances", c.instances},
          {"calibration_samples", c.calibration_samples},
          {"entropy_samples", c.entropy_samples},
          {"convergence_trials", c.convergence_trials},
          {"convergence", c.convergence}};
}

RunManifest run_suite(const std::string& name, const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.tool_version = tool_version();
  m.suite = name;
  m.config = to_json(cfg);
  bool found = false;
  for (const auto& [suite, fn] : suite_table()) {
    if (name == "all" || name == suite) {
      fn(cfg, m.checks);
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown suite \"" + name + "\"");
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return m;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  reject_unknown_keys(j, {"name", "module", "parameters", "seed", "output_path"}, text, source, "experiment config");
  ExperimentConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.module = j.at("module").get<std::string>();
  } catch (const json::exception&) {
    throw ConfigError(source + ": \"name\" and \"module\" are required strings");
  }
  const auto keys = module_keys().find(c.module);
  if (keys == module_keys().end()) {
    throw ConfigError(key_location(text, source, "module") + ": unknown module \"" + c.module + "\"");
  }
  c.parameters = j.value("parameters", json::object());
  reject_unknown_keys(c.parameters, keys->second, text, source, "parameters of module " + c.module);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError(key_location(text, source, "seed") + ": seed must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.output_path = j.value("output_path", std::string());
  return c;
}

RunManifest run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.tool_version = tool_version();
  m.suite = "verify:" + cfg.name;
  m.config = {{"name", cfg.name}, {"module", cfg.module}, {"parameters", cfg.parameters}};
  if (cfg.seed) m.config["seed"] = *cfg.seed;
  const json& p = cfg.parameters;
  const bool stochastic = cfg.module == "mc-measure" || cfg.module == "entropy";
  if (stochastic && !cfg.seed) throw ConfigError("experiment \"" + cfg.name + "\": seed is mandatory for module " + cfg.module);
  const std::uint64_t seed = cfg.seed.value_or(0);
  auto add = [&](BoundReport r) {
    r.bound_name = cfg.name + "/" + r.bound_name;
    m.checks.push_back({cfg.module, std::move(r)});
  };

  try {
    if (cfg.module == "core-geometry") {
      const auto pts = points_param(p, "points");
      const double r = param<double>(p, "radius");
      const NormKind norm = norm_from_string(param<std::string>(p, "norm", std::string("l2")));
      const Eigen::VectorXd c = 0.5 * (pts.min_corner() + pts.max_corner());
      double big_r = 0.0;
      for (Eigen::Index i = 0; i < pts.size(); ++i) big_r = std::max(big_r, norm_of(pts.point(i) - c, norm));
      const auto packing = greedy_packing(pts, r, norm);
      add(compare_upper("packing_count", bounds::packing_count_bound(static_cast<int>(pts.dim()), big_r, r),
                        static_cast<double>(packing.count)));
    } else if (cfg.module == "exact2d") {
      const auto centers = points_param(p, "centers");
      const double r = param<double>(p, "radius");
      const auto shape = param<std::string>(p, "shape", std::string("disk"));
      if (shape == "disk") {
        const auto boundary = exact2d::disk_union_boundary(centers, r);
        add(compare_upper("volume_constrained", bounds::volume_constrained(2, r, exact2d::disk_union_area(boundary)),
                          exact2d::disk_union_perimeter(boundary)));
      } else if (shape == "square") {
        const Eigen::VectorXd c = 0.5 * (centers.min_corner() + centers.max_corner());
        const double reach = (centers.max_corner() - centers.min_corner()).maxCoeff() / 2.0;
        if (reach > r) throw ConfigError("exact2d square check needs all centers in one cube of radius r");
        add(compare_upper("union_in_cube", bounds::union_in_cube(2, r), exact2d::square_union_perimeter(centers, r), 0.0,
                          1e-9));
      } else {
        throw ConfigError("parameters: shape must be \"disk\" or \"square\"");
      }
    } else if (cfg.module == "mc-measure") {
      const ParallelSetSpec spec(points_param(p, "centers"), NormKind::L2, param<double>(p, "radius"));
      auto mcfg = mc_config(param<std::uint64_t>(p, "samples", std::uint64_t{200'000}), derive_seed(seed, 1), workers);
      if (p.contains("delta")) mcfg.shell_delta = param<double>(p, "delta");
      const auto vol = mc::mc_volume(spec, mcfg);
      mcfg.seed = derive_seed(seed, 2);
      const auto shell = mc::mc_shell_lebesgue(spec, mcfg);
      const int d = static_cast<int>(spec.dim());
      add(compare_upper("volume_constrained", bounds::volume_constrained(d, spec.radius, vol.value), shell.value,
                        std::hypot(shell.std_error, bounds::volume_constrained(d, spec.radius, vol.std_error))));
    } else if (cfg.module == "bounds") {
      const int d = param<int>(p, "dim");
      const auto c = bounds::gaussian_constant(d, norm_from_string(param<std::string>(p, "norm", std::string("l2"))));
      add(compare_lower("gaussian_constant_lower", c.lower_sandwich, c.constant_c));
      add(compare_upper("gaussian_constant_upper", c.upper_sandwich, c.constant_c));
    } else if (cfg.module == "robust-risk") {
      const auto mu0 = rr::EmpiricalMeasure::uniform(points_param(p, "mu0"));
      const auto mu1 = rr::EmpiricalMeasure::uniform(points_param(p, "mu1"));
      add(rr::check_w1_domination(mu0, mu1, param<double>(p, "radius")));
    } else if (cfg.module == "entropy") {
      const auto x = points_param(p, "x");
      const auto y = points_param(p, "y");
      const entropy::DiscreteLaw lx{x.coords(), weights_param(p, "x_weights", x.size())};
      const entropy::DiscreteLaw ly{y.coords(), weights_param(p, "y_weights", y.size())};
      add(entropy::reverse_epi_check(lx, ly, param<double>(p, "smoothing"),
                                     param<std::uint64_t>(p, "samples", std::uint64_t{1'000'000}), seed, workers)
              .report);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("experiment \"" + cfg.name + "\": " + e.what());
  }
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return m;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {
std::string kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::Equal: return "equal";
  }
  return "?";
}
}  // namespace

std::string reports_csv(const std::vector<CheckRow>& rows) {
  std::ostringstream out;
  out << "suite,check,kind,bound_value,measured,std_error,allowance,slack,verdict\r\n";
  for (const auto& [suite, r] : rows) {
    out << csv_field(suite) << ',' << csv_field(r.bound_name) << ',' << kind_name(r.kind) << ','
        << io::format_double(r.bound_value) << ',' << io::format_double(r.measured) << ','
        << io::format_double(r.std_error) << ',' << io::format_double(r.allowance) << ','
        << io::format_double(r.slack) << ',' << to_string(r.verdict) << "\r\n";
  }
  return out.str();
}

ordered_json reports_json(const std::vector<CheckRow>& rows) {
  ordered_json arr = ordered_json::array();
  auto num = [](double v) { return ordered_json(v); };
  for (const auto& [suite, r] : rows) {
    arr.push_back({{"suite", suite},
                   {"check", r.bound_name},
                   {"kind", kind_name(r.kind)},
                   {"bound_value", num(r.bound_value)},
                   {"measured", num(r.measured)},
                   {"std_error", num(r.std_error)},
                   {"allowance", num(r.allowance)},
                   {"slack", num(r.slack)},
                   {"verdict", to_string(r.verdict)}});
  }
  return arr;
}

ordered_json manifest_json(const RunManifest& m) {
  return {{"tool", "parset"},
          {"version", m.tool_version},
          {"suite", m.suite},
          {"config", m.config},
          {"wall_seconds", m.wall_seconds},
          {"all_pass", m.all_pass()},
          {"checks", reports_json(m.checks)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace parset::harness
