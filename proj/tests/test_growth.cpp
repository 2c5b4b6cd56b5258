#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdecay/comparison.hpp"
#include "qdecay/gallery.hpp"
#include "qdecay/growth.hpp"
#include "qdecay/random.hpp"

using namespace qdecay;

namespace {

constexpr double kPi = std::numbers::pi;

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

GrowthCurve curve_of(const std::function<double(double)>& vol, double a, double b, int count, int n = 2) {
  GrowthCurve c;
  c.n = n;
  c.t = geometric_grid(a, b, count);
  for (double t : c.t) c.volume.push_back(vol(t));
  c.stderr_.assign(c.t.size(), 0.0);
  return c;
}

DecayOptions decay_opts(std::vector<double> radii, double r_min = 5.0) {
  DecayOptions o;
  o.radii = std::move(radii);
  o.r_min = r_min;
  return o;
}

}  // namespace

TEST_CASE("geodesic_trace examples") {
  const ChartedMetric flat = flat_metric(2);
  const Vector v = pt({0.6, 0.8});
  GeodesicPath g = geodesic_trace(flat, pt({1.0, -2.0}), v, 10.0);
  CHECK_FALSE(g.exited);
  CHECK(g.arc.back() == doctest::Approx(10.0));
  CHECK((g.x.back() - (pt({1.0, -2.0}) + 10.0 * v)).norm() < 1e-10);

  g = geodesic_trace(flat_polar_metric(), pt({1.0, 0.4}), pt({1.0, 0.0}), 5.0);
  CHECK(g.x.back()[0] == doctest::Approx(6.0));
  CHECK(g.x.back()[1] == doctest::Approx(0.4));

  // Great circle tilted 30 degrees from the equator, away from the poles.
  const double a = kPi / 6.0;
  g = geodesic_trace(round_sphere_metric(), pt({kPi / 2, 0.0}), pt({std::sin(a), std::cos(a)}), 2.0 * kPi);
  CHECK(g.max_speed_defect < 1e-6);
  CHECK(std::abs(g.x.back()[0] - kPi / 2) < 1e-6);
  CHECK(std::abs(g.x.back()[1] - 2.0 * kPi) < 1e-6);
}

TEST_CASE("geodesic_trace errors and chart exit") {
  CHECK_THROWS_AS(geodesic_trace(flat_metric(2), pt({0, 0}), pt({2, 0}), 1.0), NormalizationError);
  CHECK_THROWS_AS(geodesic_trace(flat_metric(2), pt({0, 0}), pt({1, 0, 0}), 1.0), ShapeError);
  const GeodesicPath g = geodesic_trace(flat_metric(2, 5.0), pt({0, 0}), pt({1, 0}), 20.0);
  CHECK(g.exited);
  CHECK(g.arc.back() <= 5.0 + 1e-9);
}

TEST_CASE("distance_estimate examples") {
  CHECK(distance_estimate(flat_metric(2), pt({3.0, 4.0})) == doctest::Approx(5.0));

  WarpedProfile p;
  p.warp = make_radial_function([](const auto& t) { return t * t; });
  p.base = BaseSpace::circle();
  p.t_min = 1.0;
  p.t_max = 100.0;
  const ChartedMetric end = warped_metric(p, "end");
  CHECK(distance_estimate(end, pt({7.0, 2.0})) == doctest::Approx(6.0));

  DistanceOptions graph;
  graph.methods = {DistanceMethod::graph};
  graph.graph.spacing = 0.01;
  graph.graph.region = Box::cube(2, -1.0, 1.0);
  const ChartedMetric flat = flat_metric(2);
  std::mt19937_64 rng = make_stream(9, 0);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int k = 0; k < 100; ++k) {
    const Point m = pt({u(rng), u(rng)});
    if (m.norm() < 0.1) continue;
    const double d = distance_estimate(flat, m, graph);
    CHECK(std::abs(d - m.norm()) <= 0.01 * m.norm());
    CHECK(d >= m.norm() - 2.0 * 0.01);
  }
}

TEST_CASE("distance_estimate errors") {
  CHECK_THROWS_AS(distance_estimate(flat_metric(2, 1.0), pt({2.0, 0.0})), DomainError);
  DistanceOptions none;
  none.methods.clear();
  CHECK_THROWS_AS(distance_estimate(flat_metric(2), pt({1, 0}), none), ParameterError);
  CHECK_THROWS_AS(distance_estimate(hyperbolic_horocyclic_metric(), pt({1, 0})), MethodError);
  DistanceOptions graph;
  graph.methods = {DistanceMethod::graph};
  graph.graph.spacing = 1e-4;
  graph.graph.region = Box::cube(2, -1.0, 1.0);
  CHECK_THROWS_AS(distance_estimate(flat_metric(2), pt({0.5, 0}), graph), BudgetError);
  CHECK_THROWS_AS(parse_distance_method("taxicab"), ConfigError);
}

TEST_CASE("shoot distance on the flat plane") {
  DistanceOptions shoot;
  shoot.methods = {DistanceMethod::shoot};
  CHECK(distance_estimate(flat_metric(2), pt({1.0, 2.0}), shoot) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-8));
}

TEST_CASE("ball_volume examples") {
  CHECK(ball_volume(flat_metric(2), 2.0).value == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  const ChartedMetric e2 = example2_plane(-2.0);
  const double shell = ball_volume(e2, 1000.0).value - ball_volume(e2, 2.0).value;
  CHECK(shell == doctest::Approx(2.0 * kPi * (0.5 - 1e-3)).epsilon(1e-9));
  CHECK(ball_volume(e2, 1e8).value < ball_volume(e2, 1.0).value + 2.0 * kPi);
}

TEST_CASE("ball_volume errors") {
  CHECK_THROWS_AS(ball_volume(flat_metric(2), 0.0), ParameterError);
  CHECK_THROWS_AS(ball_volume(hyperbolic_horocyclic_metric(), 1.0), MethodError);
  VolumeOptions model;
  model.method = VolumeMethod::model;
  CHECK_THROWS_AS(ball_volume(flat_metric(2), 1.0, model), MethodError);
  VolumeOptions mc;
  mc.method = VolumeMethod::monte_carlo;
  mc.mc_budget = 0;
  CHECK_THROWS_AS(ball_volume(flat_metric(2), 1.0, mc), ParameterError);
  CHECK_THROWS_AS(growth_curve(flat_metric(2), {1.0, 1.0}), GridError);
}

TEST_CASE("Monte Carlo volumes: accuracy, monotonicity and determinism") {
  VolumeOptions mc;
  mc.method = VolumeMethod::monte_carlo;
  mc.mc_budget = 100'000;
  mc.seed = 17;
  const VolumeEstimate v = ball_volume(flat_metric(2), 2.0, mc);
  CHECK(v.stderr_ > 0.0);
  CHECK(std::abs(v.value - 4.0 * kPi) < 4.0 * v.stderr_);
  CHECK(ball_volume(flat_metric(2), 2.0, mc).value == v.value);

  const GrowthCurve c = growth_curve(flat_metric(2), {0.5, 1.0, 1.5, 2.0, 2.5}, mc);
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c.volume[k] >= c.volume[k - 1]);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("property: quadrature ball volume is nondecreasing") {
  const ChartedMetric m = example2_plane(2.0);
  const GrowthCurve c = growth_curve(m, geometric_grid(0.1, 1000.0, 60));
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c.volume[k] >= c.volume[k - 1]);
}

TEST_CASE("decay_constant examples") {
  DecayReport r = decay_constant(flat_metric(2), decay_opts(geometric_grid(10.0, 1000.0, 7)));
  CHECK(r.C_fitted < 1e-12);
  CHECK_FALSE(r.divergent);

  r = decay_constant(example2_plane(2.0), decay_opts(geometric_grid(10.0, 1000.0, 7)));
  CHECK(r.C_fitted == doctest::Approx(2.0).epsilon(0.1));
  CHECK_FALSE(r.divergent);

  r = decay_constant(hyperbolic_metric(), decay_opts(geometric_grid(5.0, 200.0, 7)));
  CHECK(r.divergent);
}

TEST_CASE("decay_constant errors") {
  CHECK_THROWS_AS(decay_constant(flat_metric(2), decay_opts({})), SampleError);
  DecayOptions o = decay_opts({10.0});
  o.points_per_radius = 0;
  CHECK_THROWS_AS(decay_constant(flat_metric(2), o), ParameterError);
}

TEST_CASE("lower_decay_check examples") {
  CHECK(lower_decay_check(flat_metric(2), decay_opts(geometric_grid(10.0, 1000.0, 5))).C_lower < 1e-12);
  CHECK(lower_decay_check(round_sphere_metric(), decay_opts({1.0, 2.0, 2.5}, 0.5)).C_lower == 0.0);
  const LowerDecayReport r = lower_decay_check(example2_plane(2.0), decay_opts(geometric_grid(10.0, 1000.0, 7)));
  CHECK(r.C_lower == doctest::Approx(2.0).epsilon(0.1));
  CHECK_FALSE(r.divergent);
}

TEST_CASE("property: decay constant is invariant under constant rescaling") {
  const ChartedMetric m = example2_plane(2.0);
  const double c0 = decay_constant(m, decay_opts(geometric_grid(20.0, 2000.0, 7))).C_fitted;
  for (double u : {2.0, 10.0}) {
    const std::vector<double> radii = geometric_grid(20.0 / u, 2000.0 / u, 7);
    const double c = decay_constant(m.scaled(1.0 / (u * u)), decay_opts(radii, 1.0)).C_fitted;
    CHECK(c == doctest::Approx(c0).epsilon(0.02));
  }
}

TEST_CASE("divergence rule") {
  std::vector<std::pair<double, double>> flat, growing;
  for (double t : geometric_grid(10.0, 1e4, 10)) {
    flat.emplace_back(t, 2.0);
    growing.emplace_back(t, t * t);
  }
  CHECK_FALSE(divergent_series(flat));
  CHECK(divergent_series(growing));
  CHECK(log_slope(flat) == doctest::Approx(0.0));
}

TEST_CASE("slow_growth_check examples") {
  CHECK_FALSE(slow_growth_check(curve_of([](double t) { return kPi * t * t; }, 1.0, 1e4, 41)).slow);
  const double eps = 0.05;
  const SlowGrowthReport cone = slow_growth_check(curve_of([eps](double t) { return kPi * eps * t * t; }, 1.0, 1e4, 41));
  CHECK_FALSE(cone.slow);
  CHECK(cone.liminf_estimate == doctest::Approx(kPi * eps));
  const SlowGrowthReport collapse = slow_growth_check(
      curve_of([](double t) { return t * t * std::pow(std::log1p(t), 2.0); }, 1.0, 1e8, 81, 3));
  CHECK(collapse.slow);
  CHECK_FALSE(collapse.witness.empty());
  CHECK_THROWS_AS(slow_growth_check(curve_of([](double t) { return t * t; }, 1.0, 50.0, 10)), RangeError);
}

TEST_CASE("growth_tail_integral and loglog_slope") {
  const GrowthCurve flat = curve_of([](double t) { return kPi * t * t; }, 1.0, 1e4, 41);
  CHECK(growth_tail_integral(flat) == doctest::Approx(kPi * std::log(1e4)).epsilon(1e-10));
  CHECK(loglog_slope(flat) == doctest::Approx(2.0));
  CHECK(loglog_slope(example3_growth_model(1.0, 1.0, 12), 10.0) == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("gauss_bonnet_disk examples") {
  for (double T : {1.0, 10.0, 1e3}) {
    const GaussBonnetReport r = gauss_bonnet_disk(flat_polar_metric(), T);
    CHECK(r.boundary_total == doctest::Approx(0.0));
    CHECK(std::abs(r.area_total) < 1e-8);
  }
  GaussBonnetReport r = gauss_bonnet_disk(example2_plane(0.0), 1e6);
  CHECK(r.boundary_total == doctest::Approx(1.0));
  CHECK(r.agreement < 1e-4);
  r = gauss_bonnet_disk(example2_plane(-2.0), 1e6);
  CHECK(r.boundary_total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.area_total == doctest::Approx(1.0).epsilon(1e-4));
  r = gauss_bonnet_disk(round_sphere_metric(), 1.0);
  CHECK(r.agreement < 1e-4);
}

TEST_CASE("gauss_bonnet_disk errors") {
  CHECK_THROWS_AS(gauss_bonnet_disk(cone_metric(0.5), 10.0), CapError);
  CHECK_THROWS_AS(gauss_bonnet_disk(collapse_family(0.5).metric, 10.0), ShapeError);
  CHECK_THROWS_AS(gauss_bonnet_disk(flat_metric(2), 10.0), MethodError);
  CHECK_THROWS_AS(gauss_bonnet_disk(flat_polar_metric(), 0.0), ParameterError);
}

TEST_CASE("growth curve validation") {
  GrowthCurve c = curve_of([](double t) { return t; }, 1.0, 10.0, 5);
  CHECK_NOTHROW(c.validate());
  CHECK(c.volume_at(std::sqrt(10.0)) == doctest::Approx(std::sqrt(10.0)));
  CHECK(c.coarsened(2).t.back() == c.t.back());
  c.volume[2] = 0.1;
  CHECK_THROWS_AS(c.validate(), MonotonicityError);
  c.t[2] = c.t[1];
  CHECK_THROWS_AS(c.validate(), GridError);
}
