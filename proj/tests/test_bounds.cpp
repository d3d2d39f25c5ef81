#include "parset/bounds.hpp"

#include <doctest.h>

#include <cmath>

using namespace parset;
using namespace parset::bounds;

TEST_CASE("verdicts and slack") {
  const auto up = compare_upper("u", 1.0, 1.1, 0.03);
  CHECK(up.slack == doctest::Approx(-0.1));
  CHECK(up.verdict == Verdict::Pass);
  CHECK(compare_upper("u", 1.0, 1.2, 0.03).verdict == Verdict::Fail);
  CHECK(compare_lower("l", 1.0, 0.9, 0.0, 0.2).verdict == Verdict::Pass);
  CHECK(compare_lower("l", 1.0, 0.9).verdict == Verdict::Fail);
  const auto eq = compare_equal("e", 2.0, 2.05, 0.0, 0.1);
  CHECK(eq.verdict == Verdict::Pass);
  CHECK(eq.slack == doctest::Approx(0.05));
  CHECK(compare_equal("e", 2.0, 2.5, 0.1).verdict == Verdict::Fail);
  CHECK(uncompared("x", 3.0).verdict == Verdict::NotCompared);

  const auto agg = all_of("agg", {compare_upper("a", 1.0, 0.5), compare_upper("b", 1.0, 0.9)});
  CHECK(agg.verdict == Verdict::Pass);
  CHECK(agg.slack == doctest::Approx(0.1));
  CHECK(all_of("agg", {compare_upper("a", 1.0, 0.5), compare_upper("b", 1.0, 2.0)}).verdict == Verdict::Fail);
}

TEST_CASE("closed-form geometric bounds") {
  CHECK(union_in_ball(2, 1.0) == doctest::Approx(4.0 * M_PI));
  CHECK(union_in_ball(3, 2.0) == doctest::Approx(4.0 * 4.0 * M_PI * 4.0));
  CHECK(union_in_cube(2, 1.0) == doctest::Approx(16.0));
  CHECK(union_in_cube(3, 0.5) == doctest::Approx(6.0 * 4.0));
  CHECK(volume_constrained(2, 0.5, 3.0) == doctest::Approx(6.0 * 8.0 * 2.0));
  CHECK(volume_constrained(2, 0.5, 0.0) == 0.0);
  // delta -> 0: shell_volume / delta -> volume_constrained.
  CHECK(shell_volume(3, 0.7, 1e-9, 2.0) / 1e-9 == doctest::Approx(volume_constrained(3, 0.7, 2.0)).epsilon(1e-6));
  CHECK(reverse_bm_constant(2, 1.0) == doctest::Approx(256.0 / M_PI));
  CHECK(reverse_epi_constant(1, 1.0 / M_PI) == doctest::Approx(0.0));
  CHECK(reverse_epi_constant(2, 1.0) == doctest::Approx(-std::log(M_PI)));
  CHECK(packing_count_bound(2, 1.0, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(union_in_ball(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(volume_constrained(2, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("overflow is reported, not returned as infinity") {
  CHECK_THROWS_AS(checked_exp(1e4, "x"), std::range_error);
  CHECK(checked_exp(std::log(5.0), "x") == doctest::Approx(5.0));
  CHECK_THROWS_AS(reverse_bm_constant(300, 1e-3), std::range_error);
}

TEST_CASE("gaussian constant against high-precision references") {
  // Reference values computed independently at 50 digits.
  CHECK(gaussian_constant(1).constant_c == doctest::Approx(4.393653682408596).epsilon(1e-13));
  CHECK(gaussian_constant(2).constant_c == doctest::Approx(64.07953929557200).epsilon(1e-13));
  CHECK(gaussian_constant(3).constant_c == doctest::Approx(627.9622860779347).epsilon(1e-13));
  CHECK(gaussian_constant(2, NormKind::Linf).constant_c == doctest::Approx(94.53889242173238).epsilon(1e-13));
  CHECK(gaussian_constant(3, NormKind::Linf).constant_c == doctest::Approx(1589.769677905829).epsilon(1e-13));
  CHECK(gaussian_constant(4).coefficients.size() == 5);
}

TEST_CASE("gaussian constant sandwich holds for d up to 50") {
  for (NormKind norm : {NormKind::L2, NormKind::Linf}) {
    for (int d = 1; d <= 50; ++d) {
      const auto c = gaussian_constant(d, norm);
      CHECK(c.lower_sandwich <= c.constant_c);
      CHECK(c.constant_c <= c.upper_sandwich);
    }
  }
  CHECK(gaussian_constant(1).lower_sandwich == doctest::Approx(2.0));
  CHECK(gaussian_constant(2).lower_sandwich == doctest::Approx(16.0));
}

TEST_CASE("gaussian surface bound and sample complexity") {
  const double c = gaussian_constant(2).constant_c;
  CHECK(gaussian_surface_bound(2, 0.5, 1.0) == doctest::Approx(2.0 * c));
  CHECK(gaussian_surface_bound(2, 2.0, 0.25) == doctest::Approx(4.0 * c));
  const auto n_coarse = sample_complexity_n0(1, 1.0, 1.0, 0.1, 0.05);
  const auto n_fine = sample_complexity_n0(1, 1.0, 1.0, 0.05, 0.05);
  CHECK(n_fine > n_coarse);
  CHECK(sample_complexity_n0(1, 1.0, 1.0, 0.1, 0.01) >= n_coarse);
  // eta = eps / (2 C(sigma, 2r/3)) must stay below r/3.
  CHECK_THROWS_AS(sample_complexity_n0(1, 1e6, 1.0, 10.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(sample_complexity_n0(2, 1.0, 1.0, 0.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(sample_complexity_n0(30, 1.0, 1.0, 1e-3, 0.05), std::range_error);
}

TEST_CASE("named evaluation") {
  CHECK(evaluate_named("union_in_ball", {{"d", 2}, {"r", 1}}).at("value") == doctest::Approx(4.0 * M_PI));
  CHECK(evaluate_named("gaussian_constant", {{"d", 2}, {"norm", 1}}).at("value") == doctest::Approx(94.53889242173238));
  CHECK_THROWS_AS(evaluate_named("union_in_ball", {{"d", 2}, {"radious", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_named("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_named("union_in_ball", {{"d", 2.5}, {"r", 1}}), std::invalid_argument);
  CHECK(bound_catalog().size() >= 10);
}
