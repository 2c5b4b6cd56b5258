#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdecay/comparison.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/random.hpp"

using namespace qdecay;

namespace {

constexpr double kPi = std::numbers::pi;

RadialProfile profile_from(std::function<double(double)> pi, std::function<double(double)> ric, int n,
                           double a = 1.0, double b = 100.0) {
  return RadialProfile::from_mean_curvature(geometric_grid(a, b, 4001), pi, ric, n);
}

GrowthCurve model_curve(const std::function<double(double)>& vol, double T = 200.0, int count = 399) {
  GrowthCurve c;
  c.n = 2;
  c.t = uniform_grid(1.0, T, count);
  for (double t : c.t) c.volume.push_back(vol(t));
  c.stderr_.assign(c.t.size(), 0.0);
  return c;
}

}  // namespace

TEST_CASE("comparison_params examples") {
  ComparisonParams p = comparison_params(2.0, 2);
  CHECK(p.alpha == doctest::Approx(2.0));
  CHECK(p.N == doctest::Approx(3.0));
  CHECK_FALSE(p.C0);
  p = comparison_params(0.0, 5);
  CHECK(p.alpha == 1.0);
  CHECK(p.N == 5.0);
  p = comparison_params(6.0, 3);
  CHECK(p.alpha == doctest::Approx(3.0));
  CHECK(p.N == doctest::Approx(7.0));
  CHECK_THROWS_AS(comparison_params(-0.1, 2), ParameterError);
  CHECK_THROWS_AS(comparison_params(1.0, 1), ParameterError);
}

TEST_CASE("property: alpha(alpha - 1) = C and N = (n-1)(alpha-1) + n") {
  std::mt19937_64 rng = make_stream(1, 0);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int k = 0; k < 1000; ++k) {
    const double C = u(rng);
    const int n = 2 + k % 4;
    const ComparisonParams p = comparison_params(C, n);
    CHECK(p.alpha >= 1.0);
    CHECK(std::abs(p.alpha * (p.alpha - 1.0) - C) <= 1e-12 * std::max(1.0, C));
    CHECK(std::abs(p.N - ((n - 1) * (p.alpha - 1.0) + n)) <= 1e-12 * p.N);
  }
}

TEST_CASE("riccati_defect examples") {
  for (int n : {2, 3}) {
    const double alpha = 2.0;
    const RadialProfile eq = profile_from(
        [alpha](double t) { return alpha / t; },
        [alpha, n](double t) { return -(n - 1) * alpha * (alpha - 1.0) / (t * t); }, n);
    const std::vector<double> d = riccati_defect(eq);
    for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(d[k]) * eq.t[k] * eq.t[k] < 1e-5);
  }
  const RadialProfile flat = profile_from([](double t) { return 1.0 / t; }, [](double) { return 0.0; }, 2);
  const std::vector<double> df = riccati_defect(flat);
  for (std::size_t k = 0; k < df.size(); ++k) CHECK(std::abs(df[k]) * flat.t[k] * flat.t[k] < 1e-5);

  const RadialProfile bad = profile_from([](double t) { return 2.0 / t; }, [](double) { return 0.0; }, 2);
  const std::vector<double> d = riccati_defect(bad);
  for (std::size_t k = 0; k < d.size(); k += 500)
    CHECK(d[k] == doctest::Approx(2.0 / (bad.t[k] * bad.t[k])).epsilon(1e-4));
}

TEST_CASE("riccati_defect errors") {
  RadialProfile p;
  p.t = {1.0, 2.0};
  p.mean_curvature = {1.0, 0.5};
  p.area_element = {1.0, 2.0};
  p.ricci = {0.0, 0.0};
  CHECK_THROWS_AS(riccati_defect(p), GridError);
  CHECK_THROWS_AS(RadialProfile::from_mean_curvature({1.0, 2.0}, [](double) { return 1.0; },
                                                     [](double) { return 0.0; }, 2),
                  GridError);
  CHECK_THROWS_AS(RadialProfile::from_mean_curvature({1.0, 3.0, 2.0}, [](double) { return 1.0; },
                                                     [](double) { return 0.0; }, 2),
                  GridError);
}

TEST_CASE("mean_curvature_bound_check examples") {
  const ComparisonParams p = comparison_params(2.0, 2);
  const double a = p.alpha;
  const auto zero = [](double) { return 0.0; };

  MeanCurvatureBound b = mean_curvature_bound_check(profile_from([a](double t) { return a / t; }, zero, 2), p);
  CHECK(b.ok);
  CHECK(b.max_violation == doctest::Approx(0.0).epsilon(1e-12));

  b = mean_curvature_bound_check(profile_from([a](double t) { return a / t - 1.0 / (t * t); }, zero, 2), p);
  CHECK(b.ok);
  CHECK(b.max_violation == 0.0);

  b = mean_curvature_bound_check(profile_from([a](double t) { return (a + 0.1) / t; }, zero, 2, 2.0), p);
  CHECK_FALSE(b.ok);
  CHECK(b.max_violation == doctest::Approx(0.1 / 2.0));
}

TEST_CASE("property: equality profile has constant eta / t^{(n-1)alpha}") {
  for (double C : {0.0, 2.0, 6.0}) {
    for (int n : {2, 3}) {
      const ComparisonParams p = comparison_params(C, n);
      const RadialProfile prof = RadialProfile::from_warp(
          geometric_grid(1.0, 1e3, 20001),
          [a = p.alpha](double t) {
            return std::array<double, 3>{std::pow(t, a), a * std::pow(t, a - 1.0),
                                         a * (a - 1.0) * std::pow(t, a - 2.0)};
          },
          n);
      CHECK(eta_ratio_check(prof, p).spread < 1e-8);
      CHECK(mean_curvature_bound_check(prof, p).max_violation < 1e-12);
    }
  }
}

TEST_CASE("property: admissible Riccati profiles satisfy the mean curvature bound") {
  // Pi = alpha/t - s/t^2 is a supersolution for every s in [0, t_min].
  std::mt19937_64 rng = make_stream(2, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double C = 10.0 * u(rng), s = u(rng);
    const ComparisonParams p = comparison_params(C, 2);
    const double a = p.alpha;
    const RadialProfile prof = profile_from(
        [a, s](double t) { return a / t - s / (t * t); },
        [C](double t) { return -C / (t * t); }, 2);
    const std::vector<double> d = riccati_defect(prof);
    bool riccati_ok = true;
    for (std::size_t j = 0; j < d.size(); ++j) riccati_ok = riccati_ok && d[j] * prof.t[j] * prof.t[j] <= 1e-5;
    if (riccati_ok) CHECK(mean_curvature_bound_check(prof, p).ok);
  }
}

TEST_CASE("volume_comparison_check examples") {
  VolumeComparisonReport r = volume_comparison_check(model_curve([](double t) { return kPi * t * t; }),
                                                     comparison_params(0.0, 2));
  CHECK(r.comparison1_ok);
  CHECK(r.comparison2_ok);
  REQUIRE_FALSE(r.annulus_ratio.empty());
  CHECK(r.annulus_ratio.back().second == doctest::Approx(4.0).epsilon(0.02));

  const double alpha = 2.0;
  r = volume_comparison_check(
      model_curve([alpha](double t) { return std::pow(t, alpha + 1.0) / (alpha + 1.0); }),
      comparison_params(2.0, 2));
  CHECK(r.comparison1_ok);
  CHECK(r.comparison2_ok);
  CHECK(r.annulus_ratio.back().second == doctest::Approx(2.0 * (alpha + 1.0)).epsilon(0.05));

  r = volume_comparison_check(model_curve([](double t) { return std::exp(t); }, 60.0, 119),
                              comparison_params(2.0, 2));
  CHECK_FALSE(r.comparison2_ok);
}

TEST_CASE("volume_comparison_check errors") {
  GrowthCurve c = model_curve([](double t) { return t * t; }, 10.0, 19);
  c.volume[5] = c.volume[4] * 0.5;
  CHECK_THROWS_AS(volume_comparison_check(c, comparison_params(0.0, 2)), MonotonicityError);
  CHECK_THROWS_AS(volume_comparison_check(model_curve([](double t) { return t; }, 2.0, 5),
                                          comparison_params(0.0, 2)),
                  RangeError);
}

TEST_CASE("excess examples and errors") {
  CHECK(excess(3, 4, 7) == 0.0);
  CHECK(excess(5, 5, 6) == 4.0);
  CHECK(excess(1, 1, 2) == 0.0);
  CHECK_THROWS_AS(excess(1, 1, 3), InputError);
  CHECK_THROWS_AS(excess(-1, 2, 1), InputError);
}

TEST_CASE("property: excess is symmetric and bounded by 2 min") {
  std::mt19937_64 rng = make_stream(4, 0);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng);
    const double c = std::abs(a - b) + (a + b - std::abs(a - b)) * u(rng) / 10.0;
    CHECK(excess(a, b, c) == excess(b, a, c));
    CHECK(excess(a, b, c) <= 2.0 * std::min(a, b) + 1e-12);
  }
}

TEST_CASE("toponogov threshold") {
  CHECK(toponogov_inequality_holds(1.0));
  CHECK_FALSE(toponogov_inequality_holds(10.0));
  const ToponogovThreshold th = toponogov_threshold();
  CHECK(th.lambda_star > 2.17);
  CHECK(th.lambda_star < 2.20);
  CHECK(th.residual < 1e-10);
  std::mt19937_64 rng = make_stream(5, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    CHECK_FALSE(toponogov_inequality_holds(th.lambda_star * (1.0 + 1e-6 + 50.0 * u(rng))));
    CHECK(toponogov_inequality_holds(th.lambda_star * (1e-3 + (1.0 - 2e-3) * u(rng))));
  }
  CHECK_THROWS_AS(toponogov_inequality_holds(0.0), ParameterError);
}

TEST_CASE("diameter_bound examples and errors") {
  CHECK(diameter_bound(10.0, 1.0) == 40.0);
  CHECK(diameter_bound(0.0, 1.0) == 0.0);
  CHECK(diameter_bound(3.0, 3.0) == 4.0);
  CHECK_THROWS_AS(diameter_bound(1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(diameter_bound(-1.0, 1.0), ParameterError);
}

TEST_CASE("taylor residual on the round sphere") {
  // Pi = cot t on the unit sphere, Ric = 1.
  const RadialProfile p = RadialProfile::from_warp(
      geometric_grid(1e-3, 1.0, 200),
      [](double t) { return std::array<double, 3>{std::sin(t), std::cos(t), -std::sin(t)}; }, 2);
  CHECK(taylor_residual(p, 1.0, 0.05) < 0.05);
}
