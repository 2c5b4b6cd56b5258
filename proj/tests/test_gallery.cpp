#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdecay/comparison.hpp"
#include "qdecay/gallery.hpp"
#include "qdecay/growth.hpp"
#include "qdecay/prop3.hpp"

using namespace qdecay;

namespace {

constexpr double kPi = std::numbers::pi;

DecayOptions radii(double a, double b, int count) {
  DecayOptions o;
  o.radii = geometric_grid(a, b, count);
  return o;
}

RadialFunction constant(double c) {
  return make_radial_function([c](const auto& t) { return 0.0 * t + c; });
}

}  // namespace

TEST_CASE("example1_end examples") {
  const ChartedMetric flat = example1_end(1.0, BaseSpace::round_sphere(2));
  CHECK(decay_constant(flat, radii(10.0, 1000.0, 5)).C_fitted < 1e-10);

  const ChartedMetric c2 = example1_end(2.0, BaseSpace::circle());
  CHECK(decay_constant(c2, radii(10.0, 1000.0, 7)).C_fitted == doctest::Approx(2.0).epsilon(0.1));
  CHECK(loglog_slope(growth_curve(c2, geometric_grid(100.0, 1e4, 21))) == doctest::Approx(3.0).epsilon(0.01));

  const GrowthCurve g1 = growth_curve(example1_end(1.0, BaseSpace::circle()), geometric_grid(1.0, 1e4, 41));
  CHECK(loglog_slope(g1, 100.0) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(slow_growth_check(g1).liminf_estimate > 0.0);

  std::vector<std::string> warnings;
  example1_end(0.5, BaseSpace::circle(), &warnings);
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("example2_plane examples") {
  CHECK(decay_constant(example2_plane(0.0), radii(10.0, 1000.0, 5)).C_fitted < 1e-10);
  const ChartedMetric m = example2_plane(-2.0);
  CHECK(decay_constant(m, radii(10.0, 1000.0, 7)).C_fitted == doctest::Approx(6.0).epsilon(0.1));
  const double tail = ball_volume(m, 1e6).value - ball_volume(m, 1.0).value;
  CHECK(tail == doctest::Approx(2.0 * kPi * (1.0 - 1e-6)).epsilon(1e-8));
  CHECK(gauss_bonnet_disk(m, 1e8).area_total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("example3_growth_model examples") {
  const GrowthCurve c = example3_growth_model(1.0, 1.0, 10);
  const double t10 = std::ldexp(1.0, 11);
  CHECK(c.volume_at(t10) / (t10 * t10) == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  const GrowthCurve one = example3_growth_model(3.0, 2.0, 0);
  CHECK(one.volume[0] / (one.t[0] * one.t[0]) == doctest::Approx(3.0 / 16.0));
  CHECK(loglog_slope(example3_growth_model(1.0, 1.0, 20), 100.0) == doctest::Approx(2.0).epsilon(0.005));
  CHECK_FALSE(slow_growth_check(example3_growth_model(1.0, 1.0, 20)).slow);
  CHECK_THROWS_AS(example3_growth_model(0.0, 1.0, 3), ParameterError);
  CHECK_THROWS_AS(example3_growth_model(1.0, 1.0, -1), ParameterError);
}

TEST_CASE("collapse_family examples") {
  const CollapseFamily half = collapse_family(0.5);
  CHECK(half.beta == doctest::Approx(1.0));
  for (double t : {1.0, 10.0, 1e3}) CHECK(half.a(t)[0] == doctest::Approx(std::log1p(t)));
  const DecayReport r = decay_constant(half.metric, radii(10.0, 1000.0, 5));
  CHECK(std::isfinite(r.C_fitted));
  CHECK_FALSE(r.divergent);

  const CollapseFamily near_one = collapse_family(0.99);
  CHECK(near_one.beta == doctest::Approx(std::log(0.99) / std::log(0.5)));
  CHECK(near_one.beta < 0.02);

  const FamilyConditionReport fc = family_condition_check(collapse_family(std::sqrt(0.5)).family, 10.0, 1e4);
  CHECK(fc.holds);
  CHECK(fc.sup_first_extended == doctest::Approx(fc.sup_first).epsilon(0.05));

  CHECK_THROWS_AS(collapse_family(0.4), ParameterError);
  CHECK_THROWS_AS(collapse_family(1.0), ParameterError);
}

TEST_CASE("family_condition_check examples") {
  FamilyConditionReport r = family_condition_check(diagonal_family({constant(2.0), constant(3.0)}), 10.0, 1e4);
  CHECK(r.sup_first == 0.0);
  CHECK(r.sup_second == 0.0);
  CHECK(r.holds);

  const RadialFunction log2 = make_radial_function([](const auto& t) { return log1p(t) * log1p(t); });
  r = family_condition_check(diagonal_family({log2, log2}), 10.0, 1e4);
  CHECK(r.holds);
  CHECK(r.sup_first == doctest::Approx(2.0 * 10.0 / (11.0 * std::log(11.0))).epsilon(1e-6));

  const RadialFunction e = make_radial_function([](const auto& t) { return exp(t / 1000.0); });
  r = family_condition_check(diagonal_family({e, e}), 10.0, 1e4);
  CHECK_FALSE(r.holds);

  CHECK_THROWS_AS(family_condition_check(diagonal_family({log2}), 0.0, 10.0), ParameterError);
  CHECK_THROWS_AS(family_condition_check(diagonal_family({log2}), 10.0, 10.0), ParameterError);
}

TEST_CASE("conformal construction examples") {
  const WarpedProfile h = *flat_polar_metric().radial()->profile;
  ConformalConstruction c = conformal_quadratic_construction(h, smoothed_distance(), geometric_grid(1.0, 1e3, 13));
  CHECK(c.bound_samples.front().d_h == doctest::Approx(1.0));
  CHECK(std::exp(c.bound_samples.front().log_path_bound) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(c.distance_bound_ok);
  CHECK(std::isfinite(c.C_fitted));
  CHECK_FALSE(c.divergent);
  CHECK(c.generic_agreement < 1e-6);

  // Constant phi breaks d_h <= phi + c, so the conditions are only reported.
  c = conformal_quadratic_construction(h, constant(0.0), geometric_grid(10.0, 1e3, 7), 2.0, false);
  CHECK(c.C_fitted < 1e-12);
  CHECK(c.conditions.gap == doctest::Approx(1e3));

  const RadialFunction too_big = make_radial_function([](const auto& t) { return 2.0 * t; });
  CHECK_THROWS_AS(conformal_quadratic_construction(h, too_big, geometric_grid(1.0, 10.0, 3)), ConstructionError);
  CHECK_NOTHROW(conformal_quadratic_construction(h, too_big, geometric_grid(1.0, 10.0, 3), 2.0, false));
  CHECK_THROWS_AS(conformal_quadratic_construction(h, smoothed_distance(), {}), SampleError);
}

TEST_CASE("u_profile and E blocks") {
  CHECK(u_profile(0.2) == 0.2);
  CHECK(u_profile(0.7) == 1.0);
  CHECK_THROWS_AS(u_profile(1.5), DomainError);
  CHECK_THROWS_AS(u_profile(-0.1), DomainError);

  const WarpedProfile e6 = e_block_profile(6);
  CHECK(e6.f(0.0) == 1.0);
  CHECK(e6.f(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(warped_sectional(e6, 1.0).radial == doctest::Approx(-1.0));
  CHECK(e6.f(5.0) == doctest::Approx(std::exp(-6.0)));
  CHECK(warped_sectional(e6, 5.0).radial == doctest::Approx(0.0));
  CHECK_THROWS_AS(e_block_profile(0), ParameterError);
}

TEST_CASE("property: u is nondecreasing and E-block curvature is uniformly bounded") {
  double prev = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double u = u_profile(k / 1000.0);
    CHECK(u >= prev);
    prev = u;
  }
  auto sup = [](int k0, int k1) {
    double s = 0.0;
    for (int k = k0; k <= k1; ++k) {
      const WarpedProfile p = e_block_profile(k);
      for (int i = 1; i < 2000; ++i) s = std::max(s, std::abs(warped_sectional(p, k * i / 2000.0).radial));
    }
    return s;
  };
  const double small = sup(2, 6), large = sup(7, 12);
  CHECK(std::isfinite(small));
  CHECK(large <= small);
}

TEST_CASE("prop3 potentials and gluings") {
  CHECK(prop3_potential(2, PieceEnd::E1, 1.0) == doctest::Approx(200.0));
  CHECK(prop3_potential(2, PieceEnd::E3, 0.0) == doctest::Approx(80.0));
  CHECK(prop3_piece(3).critical_value <= 220.0);
  const MorsePotential even = prop3_piece(4);
  CHECK(even.critical_value >= even.offset - 80.0);
  CHECK(even.critical_value <= even.offset);
  for (const GluingRow& row : prop3_gluing_table(10)) CHECK_MESSAGE(row.defect < 1e-12, row.relation);
  CHECK(circle_length(3) == doctest::Approx(std::exp(-3.0)));
}

TEST_CASE("gradient flow bound examples") {
  FlowProfile unit;
  unit.length = 5.0;
  unit.gradient = [](double) { return 1.0; };
  FlowBound b = prop3_gradient_flow_bound(unit, 1.0);
  CHECK(b.total == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-12));
  CHECK(b.windows_ok);
  CHECK(b.total_ok);

  FlowProfile saddle;
  saddle.length = 3.0;
  saddle.critical = {0.5};
  saddle.gradient = [](double u) { return std::min(1.0, std::sqrt(std::abs(u - 0.5))); };
  b = prop3_gradient_flow_bound(saddle, 10.0);
  CHECK(std::isfinite(b.total));
  CHECK(b.total == doctest::Approx(b.reference).epsilon(1e-8));
  CHECK(b.D_fitted <= 1.0 + 2.0 * std::sqrt(0.5) * 2.0);
  CHECK(b.total <= b.D_fitted / (1.0 - std::exp(-1.0)));

  const FlowProfile p = prop3_flow_profile(2);
  b = prop3_gradient_flow_bound(p, 2.5);
  CHECK(b.windows_ok);
  CHECK(b.total_ok);
  CHECK(b.total == doctest::Approx(b.reference).epsilon(1e-8));
}

TEST_CASE("gradient flow bound errors") {
  FlowProfile bad;
  bad.length = 2.0;
  bad.critical = {1.0};
  bad.gradient = [](double u) { return std::abs(u - 1.0); };
  CHECK_THROWS_AS(prop3_gradient_flow_bound(bad, 1.0), ProfileError);

  FlowProfile flat;
  flat.length = 2.0;
  flat.gradient = [](double) { return 1.0; };
  CHECK_THROWS_AS(prop3_gradient_flow_bound(flat, 0.0), ParameterError);
  flat.length = 0.0;
  CHECK_THROWS_AS(prop3_gradient_flow_bound(flat, 1.0), ParameterError);
}

TEST_CASE("log-space estimates") {
  const Prop3Estimate e1 = prop3_log_estimates(1);
  CHECK(std::abs(e1.volume.log() - (952.0 - std::log(120.0))) < 1e-9);
  CHECK(std::abs(e1.t_lower.log() - (320.0 - std::log(40.0))) < 1e-9);
  CHECK(e1.log_ratio == doctest::Approx(-8.0 + 3.0 * std::log(40.0) - std::log(120.0)).epsilon(1e-12));
  CHECK(std::abs(e1.log_volume_quadrature - e1.volume.log()) < 1e-9 * e1.volume.log());

  std::vector<Prop3Estimate> rows;
  for (int j = 2; j <= 10; ++j) {
    rows.push_back(prop3_log_estimates(j));
    CHECK(std::abs(rows.back().log_ratio + 2.0 * (2 * j + 2) - (3.0 * std::log(40.0) - std::log(120.0))) < 1e-6);
  }
  CHECK(prop3_ratio_slope(rows) == doctest::Approx(-4.0).epsilon(2.5e-4));
  CHECK_THROWS_AS(prop3_log_estimates(0), ParameterError);
}

TEST_CASE("gallery catalog lists every scenario metric") {
  std::vector<std::string> names;
  for (const GalleryEntry& e : gallery_catalog()) names.push_back(e.name);
  for (const char* n : {"flat", "example1", "example2", "example3", "collapse", "prop3-estimates", "lemma31"})
    CHECK_MESSAGE(std::find(names.begin(), names.end(), n) != names.end(), n);
}
