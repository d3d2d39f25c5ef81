#pragma once

#include "parset/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace parset {

enum class Verdict { Pass, Fail, NotCompared };
std::string to_string(Verdict v);

/// How `measured` is compared against `bound_value`.
///   Upper: measured <= bound; Lower: measured >= bound;
///   Equal: |measured - bound| within the allowance.
enum class BoundKind { Upper, Lower, Equal };

/// A bound's value next to the quantity it constrains. The verdict allows
/// four standard errors plus a fixed allowance (for O(delta) bias or rounding)
/// before declaring a failure.
struct BoundReport {
  std::string bound_name;
  double bound_value = 0.0;
  double measured = 0.0;
  double std_error = 0.0;
  double allowance = 0.0;
  BoundKind kind = BoundKind::Upper;
  double slack = 0.0;  // bound - measured for Upper, measured - bound for Lower, allowance - |gap| for Equal
  Verdict verdict = Verdict::NotCompared;
};

inline constexpr double kSigmaAllowance = 4.0;

BoundReport compare_upper(std::string name, double bound, double measured, double std_error = 0.0,
                          double allowance = 0.0);
BoundReport compare_lower(std::string name, double bound, double measured, double std_error = 0.0,
                          double allowance = 0.0);
BoundReport compare_equal(std::string name, double target, double measured, double std_error = 0.0,
                          double allowance = 0.0);
BoundReport uncompared(std::string name, double bound);

/// Combines several reports into one, failing if any part fails; the slack
/// and measured value are taken from the tightest part.
BoundReport all_of(std::string name, const std::vector<BoundReport>& parts);

namespace bounds {

/// Raises std::range_error if log_value exceeds the double range.
double checked_exp(double log_value, const char* what);

/// 2^{d-1} Omega_d r^{d-1}: union of r-balls centered in a ball of radius r.
double union_in_ball(int d, double r);
/// 2d (4r)^{d-1}: union of r-cubes centered in a cube of radius r.
double union_in_cube(int d, double r);
/// (V / r) 2^{2d-1} d.
double volume_constrained(int d, double r, double volume);
/// (V / r^d) 2^{2d-1} ((r + delta)^d - r^d).
double shell_volume(int d, double r, double delta, double volume);

struct BoundedSupport {
  double ball;  // L2 parallel sets of a closed set inside B(R)
  double cube;  // Linf parallel sets of a closed set inside B(R)
};
BoundedSupport bounded_support(int d, double big_r, double r);

/// Packing-number bound for a set contained in B(R): ((R + r/2) / (r/2))^d.
double packing_count_bound(int d, double big_r, double r);

struct GaussianConstantBreakdown {
  int dim;
  NormKind norm;
  std::vector<double> coefficients;  // C_0 .. C_d
  double constant_c;
  double lower_sandwich;
  double upper_sandwich;
};

GaussianConstantBreakdown gaussian_constant(int d, NormKind norm = NormKind::L2);

/// max(C / sigma, C / r).
double gaussian_surface_bound(int d, double r, double sigma, NormKind norm = NormKind::L2);

/// 2^{4d} / (omega_d r^d).
double reverse_bm_constant(int d, double r);

/// -(d/2) ln(pi r), in nats.
double reverse_epi_constant(int d, double r);

/// Samples needed so the plug-in robust-risk estimate is eps-accurate with
/// probability 1 - delta. c0 and c1 are the (unspecified) constants of the
/// empirical Wasserstein tail; 1.0 is a placeholder default.
std::uint64_t sample_complexity_n0(int d, double sigma, double r, double eps, double delta,
                                   double c0 = 1.0, double c1 = 1.0);

/// Named evaluation used by the CLI: `bounds --eval NAME --params k=v,...`.
struct BoundInfo {
  std::string name;
  std::vector<std::string> params;
  std::string formula;
};
const std::vector<BoundInfo>& bound_catalog();
std::map<std::string, double> evaluate_named(const std::string& name,
                                             const std::map<std::string, double>& params);

}  // namespace bounds
}  // namespace parset
