#include "parset/mc_measure.hpp"

#include "parset/random.hpp"

#include <cmath>
#include <limits>

namespace parset::mc {

void McConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("McConfig: samples must be >= 1");
  if (shell_delta && !(*shell_delta > 0.0)) throw std::invalid_argument("McConfig: shell_delta must be positive");
  if (workers < 1) throw std::invalid_argument("McConfig: workers must be >= 1");
}

double McConfig::delta_for(double radius) const { return shell_delta ? *shell_delta : radius / 1000.0; }

Box bounding_box(const PointSet& base, double reach) {
  const Eigen::VectorXd pad = Eigen::VectorXd::Constant(base.dim(), reach);
  return {base.min_corner() - pad, base.max_corner() + pad};
}

namespace {

template <typename Pred>
HitCounter count_box_hits(const Box& box, const McConfig& cfg, Pred pred) {
  const Eigen::VectorXd extent = box.upper - box.lower;
  return parallel_reduce_blocks<HitCounter>(cfg.samples, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
    HitCounter acc;
    Eigen::VectorXd x(box.lower.size());
    for (std::uint64_t s = begin; s < end; ++s) {
      CounterRng rng(cfg.seed, s);
      rng.fill_uniform(x);
      x = box.lower + x.cwiseProduct(extent);
      ++acc.n;
      if (pred(x)) ++acc.hits;
    }
    return acc;
  });
}

MeasureEstimate scaled_proportion(const HitCounter& h, double scale) {
  const double n = static_cast<double>(h.n);
  const double p = static_cast<double>(h.hits) / n;
  return {scale * p, scale * std::sqrt(p * (1.0 - p) / n), h.n};
}

// True iff the distance from x to the base set lies in (inner, outer].
bool in_shell(const PointSet& base, NormKind norm, const Eigen::VectorXd& x, double inner, double outer) {
  double best = std::numeric_limits<double>::infinity();
  const auto& pts = base.coords();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const double dist = norm_of(x - pts.col(i), norm);
    if (dist <= inner) return false;
    best = std::min(best, dist);
  }
  return best <= outer;
}

}  // namespace

MeasureEstimate mc_volume(const ParallelSetSpec& spec, const McConfig& cfg) {
  cfg.validate();
  const Box box = bounding_box(spec.base, spec.radius);
  const auto hits = count_box_hits(box, cfg, [&](const Eigen::VectorXd& x) { return contains(spec, x); });
  return scaled_proportion(hits, box.volume());
}

MeasureEstimate mc_shell_lebesgue(const ParallelSetSpec& spec, const McConfig& cfg) {
  cfg.validate();
  const double delta = cfg.delta_for(spec.radius);
  const Box box = bounding_box(spec.base, spec.radius + delta);
  const auto hits = count_box_hits(box, cfg, [&](const Eigen::VectorXd& x) {
    return in_shell(spec.base, spec.norm, x, spec.radius, spec.radius + delta);
  });
  return scaled_proportion(hits, box.volume() / delta);
}

MeasureEstimate mc_gaussian_shell(const Region& region, const McConfig& cfg, double sigma) {
  cfg.validate();
  if (!(sigma > 0.0)) throw std::invalid_argument("mc_gaussian_shell: sigma must be positive");
  double scale_radius = 1.0;
  if (const auto* spec = std::get_if<ParallelSetSpec>(&region)) scale_radius = spec->radius;
  const double delta = cfg.delta_for(scale_radius);
  const auto dim = region_dim(region);
  const auto* spec = std::get_if<ParallelSetSpec>(&region);

  const auto hits = parallel_reduce_blocks<HitCounter>(cfg.samples, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
    HitCounter acc;
    Eigen::VectorXd x(dim);
    for (std::uint64_t s = begin; s < end; ++s) {
      CounterRng rng(cfg.seed, s);
      rng.fill_normal(x);
      x *= sigma;
      ++acc.n;
      const bool hit = spec ? in_shell(spec->base, spec->norm, x, spec->radius, spec->radius + delta)
                            : (region_contains(region, x, delta) && !region_contains(region, x, 0.0));
      if (hit) ++acc.hits;
    }
    return acc;
  });
  return scaled_proportion(hits, 1.0 / delta);
}

BoundReport kneser_shell_check(const PointSet& a, NormKind norm, double inner_radius, double outer_radius, double t,
                               const McConfig& cfg) {
  cfg.validate();
  if (!(inner_radius > 0.0) || !(inner_radius <= outer_radius)) {
    throw std::invalid_argument("kneser_shell_check: requires 0 < inner_radius <= outer_radius");
  }
  if (!(t >= 1.0)) throw std::invalid_argument("kneser_shell_check: requires t >= 1");

  // Same seed for both shells: sample s maps to the same unit-cube point.
  const Box outer_box = bounding_box(a, t * outer_radius);
  const Box inner_box = bounding_box(a, outer_radius);
  const auto lhs_hits = count_box_hits(outer_box, cfg, [&](const Eigen::VectorXd& x) {
    return in_shell(a, norm, x, t * inner_radius, t * outer_radius);
  });
  const auto rhs_hits = count_box_hits(inner_box, cfg, [&](const Eigen::VectorXd& x) {
    return in_shell(a, norm, x, inner_radius, outer_radius);
  });
  const auto lhs = scaled_proportion(lhs_hits, outer_box.volume());
  const auto rhs = scaled_proportion(rhs_hits, inner_box.volume());
  const double scale = std::pow(t, static_cast<double>(a.dim()));
  const double se = std::hypot(lhs.std_error, scale * rhs.std_error);
  return compare_upper("kneser_shell", scale * rhs.value, lhs.value, se);
}

MeasureEstimate solid_angle_fraction(const Eigen::VectorXd& apex, const Eigen::VectorXd& sphere_center,
                                     double sphere_radius, const Eigen::VectorXd& cap_axis, double cap_half_angle,
                                     std::uint64_t directions, std::uint64_t seed, unsigned workers) {
  const auto d = apex.size();
  if (sphere_center.size() != d || cap_axis.size() != d) throw std::invalid_argument("solid_angle_fraction: dimension mismatch");
  if (!(sphere_radius > 0.0)) throw std::invalid_argument("solid_angle_fraction: radius must be positive");
  if (directions < 1) throw std::invalid_argument("solid_angle_fraction: need at least one direction");
  const Eigen::VectorXd w = apex - sphere_center;
  if (w.norm() > sphere_radius * (1.0 + 1e-12)) {
    throw std::invalid_argument("solid_angle_fraction: apex lies outside the sphere");
  }
  const Eigen::VectorXd axis = cap_axis.normalized();
  const double cos_half = std::cos(cap_half_angle);
  const double c = w.squaredNorm() - sphere_radius * sphere_radius;

  const auto hits = parallel_reduce_blocks<HitCounter>(directions, workers, [&](std::uint64_t begin, std::uint64_t end) {
    HitCounter acc;
    Eigen::VectorXd v(d);
    for (std::uint64_t s = begin; s < end; ++s) {
      CounterRng rng(seed, s);
      rng.fill_direction(v);
      ++acc.n;
      const double b = w.dot(v);
      const double disc = b * b - c;
      if (disc < 0.0) continue;
      const double t = -b + std::sqrt(disc);  // forward exit point
      if (!(t > 0.0)) continue;
      const Eigen::VectorXd hit = w + t * v;  // relative to the center
      if (hit.dot(axis) >= sphere_radius * cos_half) ++acc.hits;
    }
    return acc;
  });
  return scaled_proportion(hits, 1.0);
}

double cap_fraction(int d, double cap_half_angle) {
  if (d < 2) throw std::invalid_argument("cap_fraction: d must be >= 2");
  const double a = std::clamp(cap_half_angle, 0.0, M_PI);
  if (d == 2) return a / M_PI;
  if (d == 3) return 0.5 * (1.0 - std::cos(a));
  // ratio of int_0^a sin^{d-2} to int_0^pi sin^{d-2}, composite Simpson
  auto integral = [d](double upper) {
    const int n = 20000;
    const double h = upper / n;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      s += w * std::pow(std::sin(k * h), d - 2);
    }
    return s * h / 3.0;
  };
  return integral(a) / integral(M_PI);
}

InscribedAngleResult inscribed_angle_check(int d, double cap_half_angle, int trials, std::uint64_t seed,
                                           std::uint64_t directions, unsigned workers) {
  if (d < 2) throw std::invalid_argument("inscribed_angle_check: d must be >= 2");
  if (trials < 1) throw std::invalid_argument("inscribed_angle_check: trials must be >= 1");
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd axis = Eigen::VectorXd::Unit(d, 0);
  const double divisor = std::ldexp(1.0, d - 1);

  const std::uint64_t center_seed = derive_seed(seed, 0xC0FFEE);
  const auto at_center = solid_angle_fraction(center, center, 1.0, axis, cap_half_angle, directions, center_seed, workers);

  InscribedAngleResult out;
  std::vector<BoundReport> parts;
  for (int k = 0; k < trials; ++k) {
    CounterRng rng(derive_seed(seed, 0xA9E7), static_cast<std::uint64_t>(k));
    Eigen::VectorXd apex(d);
    rng.fill_direction(apex);
    apex *= std::pow(rng.uniform(), 1.0 / d);
    const auto at_apex = solid_angle_fraction(apex, center, 1.0, axis, cap_half_angle, directions,
                                              derive_seed(seed, 0x1000 + static_cast<std::uint64_t>(k)), workers);
    const double se = std::hypot(at_apex.std_error, at_center.std_error / divisor);
    auto rep = compare_lower("inscribed_angle", at_center.value / divisor, at_apex.value, se);
    parts.push_back(rep);
    out.trials.push_back({apex, at_apex, at_center, rep});
  }
  out.summary = all_of("inscribed_angle", parts);
  return out;
}

}  // namespace parset::mc
