#pragma once

// Volume comparison under lower quadratic Ricci decay, the excess function,
// the hyperbolic-cosine contradiction threshold for critical points and the
// packing bound on distance-sphere components.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qdecay/growth_curve.hpp"

namespace qdecay {

struct ComparisonParams {
  double C = 0.0;      // decay constant of Ric >= -(n-1) C / d^2
  int n = 2;           // dimension
  double alpha = 1.0;  // (sqrt(1 + 4C) + 1) / 2
  double N = 2.0;      // (n - 1)(sqrt(1 + 4C) - 1) / 2 + n
  std::optional<double> C0;
};

ComparisonParams comparison_params(double C, int n);

// Mean curvature Pi and area element eta of the distance spheres along one
// radial geodesic, together with Ric(v(t), v(t)) samples.
struct RadialProfile {
  std::vector<double> t;
  std::vector<double> mean_curvature;
  std::vector<double> area_element;
  std::vector<double> ricci;
  int n = 2;

  // eta(t) = exp((n-1) int_{t_0}^t Pi) by trapezoid quadrature (eta(t_0) = 1).
  static RadialProfile from_mean_curvature(std::vector<double> grid,
                                           const std::function<double(double)>& mean_curvature,
                                           const std::function<double(double)>& ricci, int n);
  // Warped product dt^2 + f^2 h: Pi = f'/f, eta = f^{n-1}, Ric = -(n-1) f''/f.
  static RadialProfile from_warp(std::vector<double> grid,
                                 const std::function<std::array<double, 3>(double)>& warp, int n);

  void validate() const;
};

// Geometric grid with `count` points on [a, b].
std::vector<double> geometric_grid(double a, double b, int count);
std::vector<double> uniform_grid(double a, double b, int count);

// d_k = Pi'(t_k) + Pi(t_k)^2 + Ric(t_k)/(n-1), Pi' by (nonuniform) centered
// differences and second-order one-sided differences at the ends.
std::vector<double> riccati_defect(const RadialProfile& profile,
                                   const std::function<double(double)>& ric, int n);
std::vector<double> riccati_defect(const RadialProfile& profile);

struct MeanCurvatureBound {
  bool ok = false;
  double max_violation = 0.0;        // max_k (Pi(t_k) - alpha / t_k), clipped at 0
  double max_test_function = 0.0;    // max_k f(t_k)
  std::vector<double> test_function; // f(t) = e^{int_1^t Pi}[t^a Pi - a t^{a-1}]
};

MeanCurvatureBound mean_curvature_bound_check(const RadialProfile& profile,
                                              const ComparisonParams& params,
                                              double tolerance = 1e-8);

struct EtaMonotonicity {
  double max_increase = 0.0;  // largest relative increase of eta/t^{(n-1)alpha}
  double spread = 0.0;        // (max - min) / mean of eta/t^{(n-1)alpha}
};

EtaMonotonicity eta_ratio_check(const RadialProfile& profile, const ComparisonParams& params);

// Residual of (n-1) Pi = (n-1)/t - Ric t / 3 + o(t), divided by t, at the
// profile's first points with t <= t_small.
double taylor_residual(const RadialProfile& profile, double ric_at_basepoint, double t_small);

struct VolumeComparisonReport {
  double C0_fitted = 0.0;
  double C0_comparison1 = 0.0;
  double C0_comparison2 = 0.0;
  bool comparison1_ok = false;
  bool comparison2_ok = false;
  double refinement_change1 = 0.0;
  double refinement_change2 = 0.0;
  double extension_change1 = 0.0;
  double extension_change2 = 0.0;
  double sphere_area_1 = 0.0;  // vol(S_1) estimated from the curve
  // (t, vol(B_{t+1} - B_{t-1}) (t-1) / vol(B_{t-1})) on the checked grid.
  std::vector<std::pair<double, double>> annulus_ratio;
};

// Fits the smallest C0 for which both comparison inequalities hold on grid
// radii t >= 3 (with t + 1 inside the curve). An inequality is accepted when
// its C0 changes by < 5% under grid coarsening by two and under halving of
// the range.
VolumeComparisonReport volume_comparison_check(const GrowthCurve& curve,
                                               const ComparisonParams& params);

// e_pq(x) = d(p,x) + d(q,x) - d(p,q).
double excess(double d_px, double d_qx, double d_pq);

// The inequality cosh(3/lambda) <= cosh^2(2/lambda).
bool toponogov_inequality_holds(double lambda);

struct ToponogovThreshold {
  double lambda_star = 0.0;
  double residual = 0.0;  // |cosh(3/l) - cosh^2(2/l)| at l = lambda_star
};

ToponogovThreshold toponogov_threshold();

// 2 * hop_radius * annulus_volume / v_noncollapse.
double diameter_bound(double annulus_volume, double v_noncollapse, double hop_radius = 2.0);

}  // namespace qdecay
