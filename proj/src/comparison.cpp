#include "qdecay/comparison.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "qdecay/errors.hpp"

namespace qdecay {

namespace {

// Derivative at x of the quadratic through (x0,f0), (x1,f1), (x2,f2).
double quadratic_derivative(double x, double x0, double x1, double x2, double f0, double f1,
                            double f2) {
  const double w0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
  const double w1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
  const double w2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  return w0 * f0 + w1 * f1 + w2 * f2;
}

std::vector<double> grid_derivative(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t m = t.size();
  if (m < 3) throw GridError("need at least 3 grid points to differentiate");
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t c = std::clamp<std::size_t>(k, 1, m - 2);
    out[k] = quadratic_derivative(t[k], t[c - 1], t[c], t[c + 1], f[c - 1], f[c], f[c + 1]);
  }
  return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return out;
}

struct FitResult {
  double c1 = 0.0;
  double c2 = 0.0;
};

FitResult fit_comparison_constants(const GrowthCurve& curve, const ComparisonParams& params,
                                   double sphere_area_1, double ball_1,
                                   std::vector<std::pair<double, double>>* annulus) {
  FitResult fit;
  const double t_end = curve.t.back();
  bool any = false;
  for (double t : curve.t) {
    if (t < 3.0) continue;
    any = true;
    fit.c1 = std::max(fit.c1, (curve.volume_at(t) - ball_1) / (sphere_area_1 * std::pow(t, params.N)));
    if (t + 1.0 <= t_end * (1.0 + 1e-12)) {
      const double inner = curve.volume_at(t - 1.0);
      const double outer = curve.volume_at(std::min(t + 1.0, t_end));
      const double ratio = (outer - inner) * (t - 1.0) / inner;
      fit.c2 = std::max(fit.c2, ratio);
      if (annulus) annulus->emplace_back(t, ratio);
    }
  }
  if (!any) throw GridError("volume comparison needs grid radii t >= 3");
  return fit;
}

double relative_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

ComparisonParams comparison_params(double C, int n) {
  if (!(C >= 0.0)) throw ParameterError("decay constant C must be nonnegative");
  if (n < 2) throw ParameterError("dimension must be at least 2");
  ComparisonParams p;
  p.C = C;
  p.n = n;
  const double root = std::sqrt(1.0 + 4.0 * C);
  p.alpha = (root + 1.0) / 2.0;
  p.N = (n - 1) * (root - 1.0) / 2.0 + n;
  return p;
}

std::vector<double> geometric_grid(double a, double b, int count) {
  if (!(a > 0.0) || !(b > a) || count < 2) throw GridError("invalid geometric grid");
  std::vector<double> g(count);
  const double la = std::log(a), lb = std::log(b);
  for (int k = 0; k < count; ++k) g[k] = std::exp(la + (lb - la) * k / (count - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<double> uniform_grid(double a, double b, int count) {
  if (!(b > a) || count < 2) throw GridError("invalid uniform grid");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = a + (b - a) * k / (count - 1);
  g.back() = b;
  return g;
}

void RadialProfile::validate() const {
  if (t.size() < 3) throw GridError("radial profile needs at least 3 points");
  if (mean_curvature.size() != t.size() || area_element.size() != t.size() ||
      ricci.size() != t.size())
    throw ShapeError("radial profile columns differ in length");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw GridError("radial grid must be strictly increasing");
  for (double e : area_element)
    if (!(e > 0.0)) throw ProfileError("area element must be positive");
}

RadialProfile RadialProfile::from_mean_curvature(std::vector<double> grid,
                                                 const std::function<double(double)>& mean_curvature,
                                                 const std::function<double(double)>& ric, int n) {
  RadialProfile p;
  p.n = n;
  p.t = std::move(grid);
  for (double t : p.t) {
    p.mean_curvature.push_back(mean_curvature(t));
    p.ricci.push_back(ric(t));
  }
  const std::vector<double> integral = cumulative_trapezoid(p.t, p.mean_curvature);
  for (double I : integral) p.area_element.push_back(std::exp((n - 1) * I));
  p.validate();
  return p;
}

RadialProfile RadialProfile::from_warp(std::vector<double> grid,
                                       const std::function<std::array<double, 3>(double)>& warp,
                                       int n) {
  RadialProfile p;
  p.n = n;
  p.t = std::move(grid);
  for (double t : p.t) {
    const auto [f, df, d2f] = warp(t);
    p.mean_curvature.push_back(df / f);
    p.area_element.push_back(std::pow(f, n - 1));
    p.ricci.push_back(-(n - 1) * d2f / f);
  }
  p.validate();
  return p;
}

std::vector<double> riccati_defect(const RadialProfile& profile,
                                   const std::function<double(double)>& ric, int n) {
  if (profile.t.size() < 3) throw GridError("riccati defect needs at least 3 grid points");
  if (n < 2) throw ParameterError("dimension must be at least 2");
  const std::vector<double> dpi = grid_derivative(profile.t, profile.mean_curvature);
  std::vector<double> d(profile.t.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double pi = profile.mean_curvature[k];
    d[k] = dpi[k] + pi * pi + ric(profile.t[k]) / (n - 1);
  }
  return d;
}

std::vector<double> riccati_defect(const RadialProfile& profile) {
  profile.validate();
  std::vector<double> dpi = grid_derivative(profile.t, profile.mean_curvature);
  for (std::size_t k = 0; k < dpi.size(); ++k) {
    const double pi = profile.mean_curvature[k];
    dpi[k] += pi * pi + profile.ricci[k] / (profile.n - 1);
  }
  return dpi;
}

MeanCurvatureBound mean_curvature_bound_check(const RadialProfile& profile,
                                              const ComparisonParams& params, double tolerance) {
  profile.validate();
  const double a = params.alpha;
  MeanCurvatureBound out;
  out.ok = true;
  const std::vector<double> integral = cumulative_trapezoid(profile.t, profile.mean_curvature);
  out.max_test_function = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.t.size(); ++k) {
    const double t = profile.t[k];
    const double pi = profile.mean_curvature[k];
    const double violation = pi - a / t;
    out.max_violation = std::max(out.max_violation, violation);
    if (violation > tolerance * a / t) out.ok = false;
    // f(t) = e^{int Pi} t^{a-1} (t Pi - a); the sign test is made on the
    // bracket so that rounding in the growing prefactor cannot flip it.
    const double prefactor = std::exp(integral[k]) * std::pow(t, a - 1.0);
    const double bracket = t * pi - a;
    out.test_function.push_back(prefactor * bracket);
    out.max_test_function = std::max(out.max_test_function, prefactor * bracket);
    if (bracket > tolerance * a) out.ok = false;
  }
  return out;
}

EtaMonotonicity eta_ratio_check(const RadialProfile& profile, const ComparisonParams& params) {
  profile.validate();
  const double exponent = (profile.n - 1) * params.alpha;
  std::vector<double> ratio;
  for (std::size_t k = 0; k < profile.t.size(); ++k)
    ratio.push_back(profile.area_element[k] / std::pow(profile.t[k], exponent));
  EtaMonotonicity out;
  double lo = ratio[0], hi = ratio[0], sum = 0.0;
  for (std::size_t k = 0; k < ratio.size(); ++k) {
    lo = std::min(lo, ratio[k]);
    hi = std::max(hi, ratio[k]);
    sum += ratio[k];
    if (k > 0) out.max_increase = std::max(out.max_increase, (ratio[k] - ratio[k - 1]) / ratio[k - 1]);
  }
  out.spread = (hi - lo) / (sum / ratio.size());
  return out;
}

double taylor_residual(const RadialProfile& profile, double ric_at_basepoint, double t_small) {
  const int n = profile.n;
  double worst = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < profile.t.size(); ++k) {
    const double t = profile.t[k];
    if (t > t_small) break;
    any = true;
    const double model = (n - 1) / t - ric_at_basepoint * t / 3.0;
    worst = std::max(worst, std::abs((n - 1) * profile.mean_curvature[k] - model) / t);
  }
  if (!any) throw GridError("no profile points below the Taylor window");
  return worst;
}

VolumeComparisonReport volume_comparison_check(const GrowthCurve& curve,
                                               const ComparisonParams& params) {
  curve.validate();
  if (curve.t.front() > 1.0 + 1e-12 || curve.t.back() < 3.0)
    throw RangeError("volume comparison needs a curve covering [1, T] with T >= 3");
  for (std::size_t k = 1; k < curve.size(); ++k)
    if (curve.volume[k] < curve.volume[k - 1]) throw MonotonicityError("ball volume decreases");

  VolumeComparisonReport report;
  // vol(S_1) = d vol(B_t)/dt at t = 1 from the three samples nearest to 1.
  std::size_t c = 1;
  while (c + 1 < curve.size() && curve.t[c] < 1.0) ++c;
  c = std::clamp<std::size_t>(c, 1, curve.size() - 2);
  report.sphere_area_1 = quadratic_derivative(1.0, curve.t[c - 1], curve.t[c], curve.t[c + 1],
                                              curve.volume[c - 1], curve.volume[c],
                                              curve.volume[c + 1]);
  if (!(report.sphere_area_1 > 0.0)) throw ProfileError("vol(S_1) estimate is not positive");
  const double ball_1 = curve.volume_at(1.0);

  const FitResult full =
      fit_comparison_constants(curve, params, report.sphere_area_1, ball_1, &report.annulus_ratio);
  const FitResult coarse =
      fit_comparison_constants(curve.coarsened(2), params, report.sphere_area_1, ball_1, nullptr);
  const GrowthCurve half = curve.truncated(std::max(4.0, 0.5 * curve.t.back()));
  const FitResult shorter =
      fit_comparison_constants(half, params, report.sphere_area_1, ball_1, nullptr);

  report.C0_comparison1 = full.c1;
  report.C0_comparison2 = full.c2;
  report.C0_fitted = std::max(full.c1, full.c2);
  report.refinement_change1 = relative_change(full.c1, coarse.c1);
  report.refinement_change2 = relative_change(full.c2, coarse.c2);
  report.extension_change1 = relative_change(full.c1, shorter.c1);
  report.extension_change2 = relative_change(full.c2, shorter.c2);
  report.comparison1_ok = std::isfinite(full.c1) && report.refinement_change1 < 0.05 &&
                          report.extension_change1 < 0.05;
  report.comparison2_ok = std::isfinite(full.c2) && report.refinement_change2 < 0.05 &&
                          report.extension_change2 < 0.05;
  return report;
}

double excess(double d_px, double d_qx, double d_pq) {
  if (!(d_px >= 0.0) || !(d_qx >= 0.0) || !(d_pq >= 0.0))
    throw InputError("distances must be nonnegative");
  const double e = d_px + d_qx - d_pq;
  if (e < -1e-12 * std::max(1.0, d_pq)) throw InputError("triangle inequality violated");
  return std::max(0.0, e);
}

bool toponogov_inequality_holds(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  const double c2 = std::cosh(2.0 / lambda);
  return std::cosh(3.0 / lambda) <= c2 * c2;
}

ToponogovThreshold toponogov_threshold() {
  auto gap = [](double lambda) {
    const double c2 = std::cosh(2.0 / lambda);
    return std::cosh(3.0 / lambda) - c2 * c2;
  };
  // gap < 0 (inequality holds) at lambda = 1, gap > 0 at lambda = 10.
  const auto bracket = boost::math::tools::bisect(
      gap, 1.0, 10.0, boost::math::tools::eps_tolerance<double>(52));
  ToponogovThreshold out;
  out.lambda_star = 0.5 * (bracket.first + bracket.second);
  out.residual = std::abs(gap(out.lambda_star));
  return out;
}

double diameter_bound(double annulus_volume, double v_noncollapse, double hop_radius) {
  if (!(v_noncollapse > 0.0)) throw ParameterError("noncollapsing volume must be positive");
  if (!(annulus_volume >= 0.0)) throw ParameterError("annulus volume must be nonnegative");
  if (!(hop_radius > 0.0)) throw ParameterError("hop radius must be positive");
  return 2.0 * hop_radius * annulus_volume / v_noncollapse;
}

}  // namespace qdecay
