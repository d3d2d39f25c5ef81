#pragma once

#include "parset/bounds.hpp"
#include "parset/core.hpp"
#include "parset/region.hpp"

#include <cstdint>
#include <optional>

namespace parset::mc {

struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Shell width; unset means radius / 1000.
  std::optional<double> shell_delta;
  unsigned workers = 1;

  void validate() const;
  double delta_for(double radius) const;
};

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
};

/// Axis-aligned box.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double volume() const { return (upper - lower).prod(); }
};

/// [min - reach, max + reach] per axis around the base points.
Box bounding_box(const PointSet& base, double reach);

/// Volume of base + r K by uniform sampling of its tight bounding box.
MeasureEstimate mc_volume(const ParallelSetSpec& spec, const McConfig& cfg);

/// (lambda(A_{r+delta}) - lambda(A_r)) / delta from points of the bounding box
/// of A_{r+delta} that land in the shell.
MeasureEstimate mc_shell_lebesgue(const ParallelSetSpec& spec, const McConfig& cfg);

/// (gamma_sigma(R + delta B) - gamma_sigma(R)) / delta where gamma_sigma is
/// N(0, sigma^2 I). For sigma = 1 this targets the upper Gaussian surface area.
MeasureEstimate mc_gaussian_shell(const Region& region, const McConfig& cfg, double sigma = 1.0);

/// Shell volumes lambda((A + tbK) \ (A + taK)) and lambda((A + bK) \ (A + aK))
/// on a common uniform stream; passes iff lhs <= t^d rhs + 4 sigma.
BoundReport kneser_shell_check(const PointSet& a, NormKind norm, double inner_radius, double outer_radius,
                               double t, const McConfig& cfg);

/// Fraction of directions from `apex` whose ray meets the spherical cap
/// {c + rho v : v . axis >= cos(half_angle)} (the normalized solid angle).
/// The apex must lie in the closed ball; rays leave an apex on the sphere
/// only through the interior.
MeasureEstimate solid_angle_fraction(const Eigen::VectorXd& apex, const Eigen::VectorXd& sphere_center,
                                     double sphere_radius, const Eigen::VectorXd& cap_axis,
                                     double cap_half_angle, std::uint64_t directions, std::uint64_t seed,
                                     unsigned workers = 1);

/// Exact normalized solid angle of a cap seen from the sphere center.
double cap_fraction(int d, double cap_half_angle);

struct InscribedAngleTrial {
  Eigen::VectorXd apex;
  MeasureEstimate at_apex;
  MeasureEstimate at_center;
  BoundReport report;
};

struct InscribedAngleResult {
  BoundReport summary;
  std::vector<InscribedAngleTrial> trials;
};

/// Unit sphere at the origin, cap around e_1 with the given half angle, and
/// `trials` apexes drawn uniformly from the closed unit ball. Each trial
/// checks Omega(S; apex) >= Omega(S; center) / 2^{d-1} with a 4 sigma margin.
InscribedAngleResult inscribed_angle_check(int d, double cap_half_angle, int trials, std::uint64_t seed,
                                           std::uint64_t directions = 100'000, unsigned workers = 1);

}  // namespace parset::mc
