#include "parset/bounds.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace parset {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotCompared: return "not-compared";
  }
  return "?";
}

namespace {

BoundReport finish(BoundReport rep) {
  const double margin = kSigmaAllowance * rep.std_error;
  bool ok = false;
  switch (rep.kind) {
    case BoundKind::Upper:
      rep.slack = rep.bound_value - rep.measured;
      ok = rep.measured - margin <= rep.bound_value + rep.allowance;
      break;
    case BoundKind::Lower:
      rep.slack = rep.measured - rep.bound_value;
      ok = rep.measured + margin >= rep.bound_value - rep.allowance;
      break;
    case BoundKind::Equal:
      rep.slack = rep.allowance - std::abs(rep.measured - rep.bound_value);
      ok = std::abs(rep.measured - rep.bound_value) <= rep.allowance + margin;
      break;
  }
  if (!std::isfinite(rep.measured) || !std::isfinite(rep.bound_value)) ok = false;
  rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace

BoundReport compare_upper(std::string name, double bound, double measured, double std_error, double allowance) {
  return finish({std::move(name), bound, measured, std_error, allowance, BoundKind::Upper});
}

BoundReport compare_lower(std::string name, double bound, double measured, double std_error, double allowance) {
  return finish({std::move(name), bound, measured, std_error, allowance, BoundKind::Lower});
}

BoundReport compare_equal(std::string name, double target, double measured, double std_error, double allowance) {
  return finish({std::move(name), target, measured, std_error, allowance, BoundKind::Equal});
}

BoundReport uncompared(std::string name, double bound) {
  BoundReport rep;
  rep.bound_name = std::move(name);
  rep.bound_value = bound;
  rep.measured = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

BoundReport all_of(std::string name, const std::vector<BoundReport>& parts) {
  if (parts.empty()) return uncompared(std::move(name), std::numeric_limits<double>::quiet_NaN());
  // Tightest part: smallest slack measured in standard-error units when
  // available, else in absolute terms.
  auto score = [](const BoundReport& r) {
    const double margin = kSigmaAllowance * r.std_error + r.allowance;
    return r.slack + margin;
  };
  const auto worst = std::min_element(parts.begin(), parts.end(),
                                      [&](const BoundReport& a, const BoundReport& b) { return score(a) < score(b); });
  BoundReport rep = *worst;
  rep.bound_name = std::move(name);
  const bool any_fail = std::any_of(parts.begin(), parts.end(), [](const BoundReport& r) { return r.verdict == Verdict::Fail; });
  rep.verdict = any_fail ? Verdict::Fail : Verdict::Pass;
  return rep;
}

namespace bounds {

namespace {

void require_dim(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
}
void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

const double kLn2 = std::log(2.0);

}  // namespace

double checked_exp(double log_value, const char* what) {
  static const double kMaxLog = std::log(DBL_MAX);
  if (log_value > kMaxLog) throw std::range_error(std::string(what) + " overflows double range");
  return std::exp(log_value);
}

double union_in_ball(int d, double r) {
  require_dim(d);
  require_positive(r, "r");
  const double log_val = (d - 1) * kLn2 + std::log(double(d)) + log_unit_ball_volume(d) + (d - 1) * std::log(r);
  return checked_exp(log_val, "union_in_ball");
}

double union_in_cube(int d, double r) {
  require_dim(d);
  require_positive(r, "r");
  return checked_exp(std::log(2.0 * d) + (d - 1) * std::log(4.0 * r), "union_in_cube");
}

double volume_constrained(int d, double r, double volume) {
  require_dim(d);
  require_positive(r, "r");
  if (volume < 0.0) throw std::invalid_argument("volume must be nonnegative");
  if (volume == 0.0) return 0.0;
  return checked_exp(std::log(volume) - std::log(r) + (2 * d - 1) * kLn2 + std::log(double(d)),
                     "volume_constrained");
}

double shell_volume(int d, double r, double delta, double volume) {
  require_dim(d);
  require_positive(r, "r");
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  if (volume < 0.0) throw std::invalid_argument("volume must be nonnegative");
  if (volume == 0.0 || delta == 0.0) return 0.0;
  // (r + delta)^d - r^d = r^d expm1(d log1p(delta / r)); the r^d cancels.
  const double growth = std::expm1(d * std::log1p(delta / r));
  return checked_exp(std::log(volume) + (2 * d - 1) * kLn2 + std::log(growth), "shell_volume");
}

double packing_count_bound(int d, double big_r, double r) {
  require_dim(d);
  require_positive(r, "r");
  if (big_r < 0.0) throw std::invalid_argument("R must be nonnegative");
  return checked_exp(d * (std::log(big_r + 0.5 * r) - std::log(0.5 * r)), "packing_count_bound");
}

BoundedSupport bounded_support(int d, double big_r, double r) {
  require_dim(d);
  require_positive(r, "r");
  if (big_r < 0.0) throw std::invalid_argument("R must be nonnegative");
  const double log_omega = log_unit_ball_volume(d);
  const double log_ball = d * (std::log(big_r + 0.5 * r) - std::log(0.5 * r)) + (d - 1) * kLn2 +
                          std::log(double(d)) + log_omega + (d - 1) * std::log(r);
  const double log_cube = log_omega + d * std::log(big_r + 0.5 * r * std::sqrt(double(d))) +
                          std::log(double(d)) - std::log(r) + (2 * d - 1) * kLn2;
  return {checked_exp(log_ball, "bounded_support"), checked_exp(log_cube, "bounded_support")};
}

GaussianConstantBreakdown gaussian_constant(int d, NormKind norm) {
  require_dim(d);
  // log C_i = log binom(d, i) + ((d-i)/2) log 2 + lgamma(1 + (d-i)/2) + i log(3/2) [+ (i/2) log d]
  std::vector<double> log_coeffs(d + 1);
  for (int i = 0; i <= d; ++i) {
    const double k = 0.5 * (d - i);
    double lc = std::lgamma(d + 1.0) - std::lgamma(i + 1.0) - std::lgamma(d - i + 1.0) + k * kLn2 +
                std::lgamma(1.0 + k) + i * std::log(1.5);
    if (norm == NormKind::Linf) lc += 0.5 * i * std::log(double(d));
    log_coeffs[i] = lc;
  }
  const double peak = *std::max_element(log_coeffs.begin(), log_coeffs.end());
  double scaled_sum = 0.0;
  for (double lc : log_coeffs) scaled_sum += std::exp(lc - peak);
  const double log_sum = peak + std::log(scaled_sum);

  // Prefactor (2 pi)^{-d/2} 2^{2d-1} Omega_d, with Omega_d = d omega_d for
  // both norms.
  const double log_c = -0.5 * d * std::log(2.0 * M_PI) + (2 * d - 1) * kLn2 + std::log(double(d)) +
                       log_unit_ball_volume(d) + log_sum;

  GaussianConstantBreakdown out;
  out.dim = d;
  out.norm = norm;
  out.coefficients.reserve(d + 1);
  for (double lc : log_coeffs) out.coefficients.push_back(checked_exp(lc, "gaussian_constant coefficient"));
  out.constant_c = checked_exp(log_c, "gaussian_constant");
  const double log_lower = (2 * d - 1) * kLn2 + std::log(double(d));
  double log_upper = log_lower + std::log(double(d)) + d * std::log(3.0);
  if (norm == NormKind::Linf) log_upper += 0.5 * d * std::log(double(d));
  out.lower_sandwich = checked_exp(log_lower, "gaussian_constant lower sandwich");
  out.upper_sandwich = checked_exp(log_upper, "gaussian_constant upper sandwich");
  return out;
}

double gaussian_surface_bound(int d, double r, double sigma, NormKind norm) {
  require_positive(r, "r");
  require_positive(sigma, "sigma");
  const double c = gaussian_constant(d, norm).constant_c;
  return std::max(c / sigma, c / r);
}

double reverse_bm_constant(int d, double r) {
  require_dim(d);
  require_positive(r, "r");
  return checked_exp(4 * d * kLn2 - log_unit_ball_volume(d) - d * std::log(r), "reverse_bm_constant");
}

double reverse_epi_constant(int d, double r) {
  require_dim(d);
  require_positive(r, "r");
  return -0.5 * d * std::log(M_PI * r);
}

std::uint64_t sample_complexity_n0(int d, double sigma, double r, double eps, double delta, double c0, double c1) {
  require_dim(d);
  require_positive(sigma, "sigma");
  require_positive(r, "r");
  require_positive(eps, "eps");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(c0 >= 1.0)) throw std::invalid_argument("c0 must be >= 1");
  require_positive(c1, "c1");

  const double c_sigma = gaussian_surface_bound(d, 2.0 * r / 3.0, sigma);
  const double eta = eps / (2.0 * c_sigma);
  if (!(eta < r / 3.0)) {
    throw std::invalid_argument("sample_complexity_n0: eta = eps / (2 C(sigma, 2r/3)) = " + std::to_string(eta) +
                                " is not below r/3; eps is too large for this r and sigma");
  }
  const double log_n0 = std::log(std::log(2.0 / delta) + std::log(c0)) - std::log(c1) - d * std::log(0.5 * eta * eps);
  static const double kMaxLog = std::log(9.2e18);
  if (log_n0 > kMaxLog) throw std::range_error("sample_complexity_n0 exceeds 64-bit range");
  // ceil with a guard against rounding just above an integer
  const double n0 = std::exp(log_n0);
  const double rounded = std::round(n0);
  return static_cast<std::uint64_t>(std::abs(n0 - rounded) <= 1e-9 * n0 ? rounded : std::ceil(n0));
}

const std::vector<BoundInfo>& bound_catalog() {
  static const std::vector<BoundInfo> catalog = {
      {"union_in_ball", {"d", "r"}, "2^(d-1) * Omega_d * r^(d-1)"},
      {"union_in_cube", {"d", "r"}, "2d * (4r)^(d-1)"},
      {"volume_constrained", {"d", "r", "V"}, "(V/r) * 2^(2d-1) * d"},
      {"shell_volume", {"d", "r", "delta", "V"}, "(V/r^d) * 2^(2d-1) * ((r+delta)^d - r^d)"},
      {"bounded_support", {"d", "R", "r"}, "ball: ((R+r/2)/(r/2))^d * 2^(d-1) d omega_d r^(d-1); cube: omega_d (R + r sqrt(d)/2)^d d / r * 2^(2d-1)"},
      {"gaussian_constant", {"d", "norm"}, "(2pi)^(-d/2) * 2^(2d-1) * Omega_d * sum_i C_i  (norm: 0 = L2, 1 = Linf)"},
      {"gaussian_surface", {"d", "r", "sigma", "norm"}, "max(C/sigma, C/r)"},
      {"reverse_bm", {"d", "r"}, "2^(4d) / (omega_d r^d)"},
      {"reverse_epi", {"d", "r"}, "-(d/2) ln(pi r)"},
      {"sample_complexity", {"d", "sigma", "r", "eps", "delta", "c0", "c1"}, "(ln(2/delta) + ln c0) / (c1 (eta eps/2)^d), eta = eps / (2 C(sigma, 2r/3))"},
  };
  return catalog;
}

std::map<std::string, double> evaluate_named(const std::string& name, const std::map<std::string, double>& params) {
  const auto& catalog = bound_catalog();
  const auto info = std::find_if(catalog.begin(), catalog.end(), [&](const BoundInfo& b) { return b.name == name; });
  if (info == catalog.end()) throw std::invalid_argument("unknown bound '" + name + "'");
  for (const auto& [key, value] : params) {
    (void)value;
    if (std::find(info->params.begin(), info->params.end(), key) == info->params.end()) {
      throw std::invalid_argument("bound '" + name + "' has no parameter '" + key + "'");
    }
  }
  auto get = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("bound '" + name + "' requires parameter '" + key + "'");
  };
  auto get_dim = [&]() {
    const double d = get("d");
    if (d != std::floor(d) || d < 1) throw std::invalid_argument("parameter d must be a positive integer");
    return static_cast<int>(d);
  };
  auto get_norm = [&]() { return get("norm", 0.0) == 0.0 ? NormKind::L2 : NormKind::Linf; };

  if (name == "union_in_ball") return {{"value", union_in_ball(get_dim(), get("r"))}};
  if (name == "union_in_cube") return {{"value", union_in_cube(get_dim(), get("r"))}};
  if (name == "volume_constrained") return {{"value", volume_constrained(get_dim(), get("r"), get("V"))}};
  if (name == "shell_volume") return {{"value", shell_volume(get_dim(), get("r"), get("delta"), get("V"))}};
  if (name == "bounded_support") {
    const auto b = bounded_support(get_dim(), get("R"), get("r"));
    return {{"ball", b.ball}, {"cube", b.cube}};
  }
  if (name == "gaussian_constant") {
    const auto g = gaussian_constant(get_dim(), get_norm());
    return {{"value", g.constant_c}, {"lower_sandwich", g.lower_sandwich}, {"upper_sandwich", g.upper_sandwich}};
  }
  if (name == "gaussian_surface") return {{"value", gaussian_surface_bound(get_dim(), get("r"), get("sigma", 1.0), get_norm())}};
  if (name == "reverse_bm") return {{"value", reverse_bm_constant(get_dim(), get("r"))}};
  if (name == "reverse_epi") return {{"value", reverse_epi_constant(get_dim(), get("r"))}};
  if (name == "sample_complexity") {
    const auto n0 = sample_complexity_n0(get_dim(), get("sigma"), get("r"), get("eps"), get("delta"), get("c0", 1.0), get("c1", 1.0));
    return {{"value", static_cast<double>(n0)}};
  }
  throw std::invalid_argument("unknown bound '" + name + "'");
}

}  // namespace bounds
}  // namespace parset
