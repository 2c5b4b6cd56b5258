#include "qdecay/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "qdecay/comparison.hpp"
#include "qdecay/curvature.hpp"
#include "qdecay/gallery.hpp"
#include "qdecay/growth.hpp"
#include "qdecay/prop3.hpp"
#include "qdecay/random.hpp"

namespace qdecay {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Point random_chart_point(const Box& box, double t, std::mt19937_64& rng) {
  Point x(box.dimension());
  x[0] = t;
  for (int i = 1; i < box.dimension(); ++i) x[i] = uniform(rng, box.lower[i], box.upper[i]);
  return x;
}

// a t^c + b t, positive for t > 0.
RadialFunction random_warp(std::mt19937_64& rng) {
  const double a = uniform(rng, 0.5, 2.0), c = uniform(rng, -2.0, 2.0), b = uniform(rng, 0.0, 1.0);
  return make_radial_function([a, b, c](const auto& t) { return a * pow(t, c) + b * t; });
}

double generic_sectional(const ChartedMetric& m, const Point& x, int i, int j) {
  const int n = m.dimension();
  return sectional(riemann(m, x), eval_metric(m, x), Vector::Unit(n, i), Vector::Unit(n, j));
}

// ---------------------------------------------------------------------------

json criterion1(std::uint64_t seed, bool& pass) {
  const int configs = 100;
  const auto start = std::chrono::steady_clock::now();

  double warped_max = 0.0;
  {
    std::mt19937_64 rng = make_stream(seed, 101);
    for (int k = 0; k < configs; ++k) {
      WarpedProfile p;
      switch (k % 4) {
        case 0: p.base = BaseSpace::circle(uniform(rng, 1.0, 10.0)); break;
        case 1: p.base = BaseSpace::round_sphere(2, uniform(rng, 0.5, 2.0)); break;
        case 2: p.base = BaseSpace::flat_torus(2, uniform(rng, 1.0, 5.0)); break;
        default: p.base = BaseSpace::hyperbolic_surface(-uniform(rng, 0.5, 2.0)); break;
      }
      p.warp = random_warp(rng);
      p.t_min = 0.5;
      p.t_max = 100.0;
      const ChartedMetric m = warped_metric(p, "oracle");
      const double t = uniform(rng, 1.0, 50.0);
      const Point x = random_chart_point(m.domain(), t, rng);
      const WarpedCurvatures oracle = warped_sectional(p, t);
      warped_max = std::max(warped_max, rel_diff(generic_sectional(m, x, 0, 1), oracle.radial));
      if (oracle.tangential)
        warped_max = std::max(warped_max, rel_diff(generic_sectional(m, x, 1, 2), *oracle.tangential));
    }
  }

  double doubly_max = 0.0;
  {
    std::mt19937_64 rng = make_stream(seed, 102);
    for (int k = 0; k < configs; ++k) {
      const RadialFunction a = random_warp(rng), b = random_warp(rng);
      const ChartedMetric m = doubly_warped_metric(a, b, 0.5, 100.0, "oracle");
      const double t = uniform(rng, 1.0, 50.0);
      const Point x = random_chart_point(m.domain(), t, rng);
      const DoublyWarpedCurvatures oracle = doubly_warped_sectional(a, b, t);
      doubly_max = std::max(doubly_max, rel_diff(generic_sectional(m, x, 0, 1), oracle.ta));
      doubly_max = std::max(doubly_max, rel_diff(generic_sectional(m, x, 0, 2), oracle.tb));
      doubly_max = std::max(doubly_max, rel_diff(generic_sectional(m, x, 1, 2), oracle.ab));
    }
  }

  double conformal_max = 0.0;
  {
    std::mt19937_64 rng = make_stream(seed, 103);
    std::normal_distribution<double> normal;
    for (int k = 0; k < configs; ++k) {
      WarpedProfile p;
      p.base = k % 2 == 0 ? BaseSpace::circle() : BaseSpace::round_sphere(2);
      p.warp = random_warp(rng);
      p.t_min = 0.5;
      p.t_max = 100.0;
      const ChartedMetric h = warped_metric(p, "h");
      const double q1 = uniform(rng, -0.5, 0.5), q2 = uniform(rng, -0.5, 0.5),
                   q3 = uniform(rng, -0.5, 0.5);
      const int last = h.dimension() - 1;
      const ScalarField phi = ScalarField::from_expression([q1, q2, q3, last](const auto& x) {
        return q1 * x[0] + q2 * log(x[0]) + q3 * sin(x[last]);
      });
      const ChartedMetric g = conformal_metric(h, phi, "g");
      const double t = uniform(rng, 1.0, 20.0);
      const Point x = random_chart_point(h.domain(), t, rng);
      const CurvatureTensor oracle =
          conformal_riemann(riemann(h, x), h.components(x), conformal_data(h, phi, x));
      const CurvatureTensor generic = riemann(g, x);
      const Matrix gx = eval_metric(g, x);
      const int n = h.dimension();
      for (int q = 0; q < 3; ++q) {
        Vector v(n), w(n);
        for (int i = 0; i < n; ++i) v[i] = normal(rng);
        for (int i = 0; i < n; ++i) w[i] = normal(rng);
        conformal_max =
            std::max(conformal_max, rel_diff(sectional(generic, gx, v, w), sectional(oracle, gx, v, w)));
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool ok = warped_max < 1e-6 && doubly_max < 1e-6 && conformal_max < 1e-5;
  pass = ok && seconds < 10.0;
  return {{"configurations_each", configs},
          {"warped_max_rel", warped_max},
          {"doubly_warped_max_rel", doubly_max},
          {"conformal_max_rel", conformal_max},
          {"tolerances", {1e-6, 1e-6, 1e-5}},
          {"within_tolerance", ok},
          {"runtime_under_10s", seconds < 10.0}};
}

json criterion2(std::uint64_t seed, bool& pass) {
  std::mt19937_64 rng = make_stream(seed, 201);
  const ChartedMetric sphere = round_sphere_metric();
  const ChartedMetric hyper = hyperbolic_metric();
  double sphere_err = 0.0, hyper_err = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Point xs = random_chart_point(sphere.domain(), uniform(rng, 0.1, 3.0), rng);
    sphere_err = std::max(sphere_err, std::abs(generic_sectional(sphere, xs, 0, 1) - 1.0));
    const Point xh = random_chart_point(hyper.domain(), uniform(rng, 0.1, 30.0), rng);
    hyper_err = std::max(hyper_err, std::abs(generic_sectional(hyper, xh, 0, 1) + 1.0));
  }
  pass = sphere_err < 1e-8 && hyper_err < 1e-8;
  return {{"points", 50}, {"sphere_max_abs_error", sphere_err}, {"hyperbolic_max_abs_error", hyper_err}};
}

json criterion3(std::uint64_t, bool& pass) {
  const std::vector<double> grid = geometric_grid(1.0, 100.0, 200001);
  json rows = json::array();
  pass = true;
  for (int n : {2, 3}) {
    for (double C : {0.0, 2.0, 6.0}) {
      const ComparisonParams params = comparison_params(C, n);
      const RadialProfile profile = RadialProfile::from_warp(grid, power_warp(params.alpha), n);
      double defect = 0.0;
      for (double d : riccati_defect(profile)) defect = std::max(defect, std::abs(d));
      const MeanCurvatureBound bound = mean_curvature_bound_check(profile, params);
      const EtaMonotonicity eta = eta_ratio_check(profile, params);
      const bool ok = defect < 1e-8 && bound.ok && bound.max_violation < 1e-13 && eta.spread < 1e-8;
      pass = pass && ok;
      rows.push_back({{"n", n},
                      {"C", C},
                      {"alpha", params.alpha},
                      {"max_riccati_defect", defect},
                      {"mean_curvature_violation", bound.max_violation},
                      {"eta_ratio_spread", eta.spread},
                      {"pass", ok}});
    }
  }
  return {{"grid_points", grid.size()}, {"cases", rows}};
}

json criterion4(std::uint64_t, bool& pass) {
  const std::vector<double> grid = uniform_grid(1.0, 200.0, 399);
  json rows = json::array();
  pass = true;
  auto check = [&](const std::string& label, const GrowthCurve& curve, const ComparisonParams& params) {
    const VolumeComparisonReport r = volume_comparison_check(curve, params);
    const bool ok = std::isfinite(r.C0_fitted) && r.comparison1_ok && r.comparison2_ok &&
                    r.refinement_change1 < 0.05 && r.refinement_change2 < 0.05;
    pass = pass && ok;
    rows.push_back({{"curve", label},
                    {"C", params.C},
                    {"C0_fitted", r.C0_fitted},
                    {"refinement_change1", r.refinement_change1},
                    {"refinement_change2", r.refinement_change2},
                    {"comparison1_ok", r.comparison1_ok},
                    {"comparison2_ok", r.comparison2_ok},
                    {"pass", ok}});
    return r;
  };

  const VolumeComparisonReport flat =
      check("flat R^2", growth_curve(flat_metric(2), grid), comparison_params(0.0, 2));
  for (double alpha : {1.0, 2.0, 3.0}) {
    GrowthCurve curve;
    curve.n = 2;
    curve.method = VolumeMethod::model;
    curve.t = grid;
    for (double t : grid) {
      curve.volume.push_back(std::pow(t, alpha + 1.0) / (alpha + 1.0));
      curve.stderr_.push_back(0.0);
    }
    check("t^(alpha+1)/(alpha+1), alpha = " + std::to_string(static_cast<int>(alpha)), curve,
          comparison_params(alpha * (alpha - 1.0), 2));
  }

  double ratio_100 = std::nan("");
  for (const auto& [t, ratio] : flat.annulus_ratio)
    if (std::abs(t - 100.0) < 1e-9) ratio_100 = ratio;
  const double annulus_error = std::abs(ratio_100 - 4.0) / 4.0;
  const bool annulus_ok = annulus_error < 0.02;
  pass = pass && annulus_ok;
  return {{"cases", rows},
          {"flat_annulus_ratio_t100", ratio_100},
          {"flat_annulus_relative_error", annulus_error},
          {"annulus_ok", annulus_ok}};
}

json criterion5(std::uint64_t, bool& pass) {
  const Prop3Estimate e1 = prop3_log_estimates(1);
  const double vol_err = std::abs(e1.volume.log() - (952.0 - std::log(120.0)));
  const double t_err = std::abs(e1.t_lower.log() - (320.0 - std::log(40.0)));
  std::vector<Prop3Estimate> rows;
  json table = json::array();
  double quad_err = 0.0;
  for (int j = 2; j <= 10; ++j) {
    rows.push_back(prop3_log_estimates(j));
    const Prop3Estimate& e = rows.back();
    quad_err = std::max({quad_err, rel_diff(e.volume.log(), e.log_volume_quadrature),
                         rel_diff(e.t_lower.log(), e.log_t_quadrature)});
    table.push_back({{"j", j}, {"log_ratio", e.log_ratio}});
  }
  const double slope = prop3_ratio_slope(rows);
  pass = vol_err < 1e-9 && t_err < 1e-9 && std::abs(slope + 4.0) <= 1e-3;
  return {{"log_vol_F1", e1.volume.log()},
          {"log_vol_F1_error", vol_err},
          {"log_t2_lower", e1.t_lower.log()},
          {"log_t2_error", t_err},
          {"slope", slope},
          {"quadrature_cross_check_rel", quad_err},
          {"table", table}};
}

json criterion6(std::uint64_t seed, bool& pass) {
  const auto start = std::chrono::steady_clock::now();
  DecayOptions opt;
  opt.radii = geometric_grid(10.0, 1e3, 13);
  opt.seed = seed;
  const DecayReport flat = decay_constant(flat_metric(2), opt);
  const DecayReport ex2 = decay_constant(example2_plane(2.0), opt);
  DecayOptions hopt = opt;
  hopt.radii = geometric_grid(5.0, 200.0, 13);
  const DecayReport hyper = decay_constant(hyperbolic_metric(), hopt);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool flat_ok = flat.C_fitted == 0.0;
  const bool ex2_ok = ex2.C_fitted >= 1.8 && ex2.C_fitted <= 2.2;
  pass = flat_ok && ex2_ok && hyper.divergent && seconds < 30.0;
  return {{"flat_C", flat.C_fitted},
          {"example2_c2_C", ex2.C_fitted},
          {"example2_divergent", ex2.divergent},
          {"hyperbolic_slope", hyper.slope},
          {"hyperbolic_divergent", hyper.divergent},
          {"runtime_under_30s", seconds < 30.0}};
}

json criterion7(std::uint64_t, bool& pass) {
  const double T = 1e8;
  json rows = json::array();
  pass = true;
  for (double c : {-2.0, 0.0, 0.5}) {
    const GaussBonnetReport r = gauss_bonnet_disk(example2_plane(c), T);
    const bool ok = std::abs(r.boundary_total - 1.0) < 1e-3 && std::abs(r.area_total - 1.0) < 1e-3 &&
                    r.agreement < 1e-4;
    pass = pass && ok;
    rows.push_back({{"c", c},
                    {"boundary_total", r.boundary_total},
                    {"area_total", r.area_total},
                    {"agreement", r.agreement},
                    {"pass", ok}});
  }
  const GaussBonnetReport flat = gauss_bonnet_disk(flat_polar_metric(), T);
  const bool flat_ok = std::abs(flat.boundary_total) < 1e-6 && std::abs(flat.area_total) < 1e-6 &&
                       flat.agreement < 1e-4;
  pass = pass && flat_ok;
  return {{"T", T},
          {"example2", rows},
          {"flat_boundary_total", flat.boundary_total},
          {"flat_area_total", flat.area_total},
          {"flat_ok", flat_ok}};
}

json criterion8(std::uint64_t, bool& pass) {
  const CollapseFamily cf = collapse_family(1.0 / std::sqrt(2.0));
  const FamilyConditionReport fam = family_condition_check(cf.family, 10.0, 1e4);
  const bool family_ok = std::isfinite(fam.sup_first) && std::isfinite(fam.sup_second) && fam.holds;

  const GrowthCurve curve = growth_curve(cf.metric, geometric_grid(1.0, 1e8, 81));
  bool monotone = true;
  double previous = std::numeric_limits<double>::infinity();
  double peak_t = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double t = curve.t[k];
    if (t < 10.0 || t > 1e4 * (1.0 + 1e-12)) continue;
    const double ratio = curve.volume[k] / (t * t * t);
    if (ratio > previous) monotone = false;
    if (ratio > peak) peak = ratio, peak_t = t;
    previous = ratio;
  }
  const double drop = (curve.volume_at(10.0) / 1e3) / (curve.volume_at(1e4) / 1e12);
  const bool drop_ok = drop >= 100.0;
  const SlowGrowthReport slow = slow_growth_check(curve);

  const GrowthCurve ex3 = example3_growth_model(1.0, 1.0, 20);
  const SlowGrowthReport ex3_slow = slow_growth_check(ex3);
  const double ex3_slope = loglog_slope(ex3, 16.0);
  const bool ex3_ok = !ex3_slow.slow && std::abs(ex3_slope - 2.0) <= 0.01;

  pass = family_ok && monotone && drop_ok && slow.slow && ex3_ok;
  return {{"beta", cf.beta},
          {"sup_first", fam.sup_first},
          {"sup_second", fam.sup_second},
          {"sup_first_extended", fam.sup_first_extended},
          {"sup_second_extended", fam.sup_second_extended},
          {"family_condition_ok", family_ok},
          {"ratio_monotone_10_to_1e4", monotone},
          {"ratio_peak_t", peak_t},
          {"ratio_drop_10_to_1e4", drop},
          {"drop_at_least_100x", drop_ok},
          {"slow_reference_ratio", slow.reference_ratio},
          {"slow_liminf_estimate", slow.liminf_estimate},
          {"slow_flag", slow.slow},
          {"example3_slow_flag", ex3_slow.slow},
          {"example3_loglog_slope", ex3_slope},
          {"example3_ok", ex3_ok}};
}

json criterion9(std::uint64_t seed, bool& pass) {
  const ToponogovThreshold th = toponogov_threshold();
  std::mt19937_64 rng = make_stream(seed, 901);
  int below_ok = 0, above_ok = 0;
  for (int k = 0; k < 100; ++k) {
    if (toponogov_inequality_holds(uniform(rng, 0.5, th.lambda_star - 1e-6))) ++below_ok;
    if (!toponogov_inequality_holds(uniform(rng, th.lambda_star + 1e-6, 20.0))) ++above_ok;
  }
  pass = th.lambda_star >= 2.17 && th.lambda_star <= 2.20 && th.residual < 1e-10 && below_ok == 100 &&
         above_ok == 100;
  return {{"lambda_star", th.lambda_star},
          {"residual", th.residual},
          {"holds_below", below_ok},
          {"fails_above", above_ok}};
}

const char* kTitles[] = {
    "",
    "oracle agreement (warped, doubly-warped, conformal)",
    "sign convention (sphere +1, hyperbolic -1)",
    "comparison equality case (warped models)",
    "volume comparison bounds",
    "log-space volume and distance estimates",
    "decay fitting",
    "Gauss-Bonnet integrality",
    "collapse family and quadratic-growth model",
    "Toponogov threshold",
    "determinism and suite runtime",
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  using Fn = json (*)(std::uint64_t, bool&);
  static const Fn fns[] = {nullptr,    criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7, criterion8, criterion9};
  if (id < 1 || id > 9) throw ParameterError("criterion id must be in 1..9");
  CriterionResult r;
  r.id = id;
  r.title = kTitles[id];
  const auto start = std::chrono::steady_clock::now();
  try {
    r.evidence = fns[id](seed, r.pass);
  } catch (const Error& e) {
    r.pass = false;
    r.evidence = {{"error", e.what()}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  double total = 0.0;
  for (int id = 1; id <= 9; ++id) {
    results.push_back(run_criterion(id, options.seed));
    total += results.back().seconds;
  }
  if (options.determinism) {
    CriterionResult r;
    r.id = 10;
    r.title = kTitles[10];
    const auto start = std::chrono::steady_clock::now();
    std::vector<CriterionResult> again;
    for (int id = 1; id <= 9; ++id) again.push_back(run_criterion(id, options.seed));
    const bool identical = acceptance_report(results).dump() == acceptance_report(again).dump();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = identical && total < 300.0;
    r.evidence = {{"reports_identical", identical}, {"suite_under_5_minutes", total < 300.0}};
    results.push_back(std::move(r));
  }
  return results;
}

json acceptance_report(const std::vector<CriterionResult>& results) {
  json out = json::array();
  for (const auto& r : results)
    out.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"evidence", r.evidence}});
  return out;
}

std::string format_line(const CriterionResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s  %2d  %s  (%.2f s)", result.pass ? "PASS" : "FAIL", result.id,
                result.title.c_str(), result.seconds);
  return buf;
}

}  // namespace qdecay
