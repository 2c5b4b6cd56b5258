#pragma once

// Explicit metrics and closed-form models: flat and constant-curvature
// controls, warped ends over constant-curvature bases, the doubly-warped
// collapsing torus end, the scaling model of a surface with quadratic growth
// and the conformal construction e^{2 phi} h with its distance bound.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "qdecay/curvature.hpp"
#include "qdecay/growth_curve.hpp"
#include "qdecay/metric.hpp"

namespace qdecay {

// ---------------------------------------------------------------------------
// Warps

// t^c on t > 0.
RadialFunction power_warp(double c);

// f(t) = (1 - s) t + s t^c with s = psi((t - 1/4) / (3/4)): equal to t near
// 0 (a smooth cap) and to t^c for t >= 1.
RadialFunction capped_power_warp(double c);

// ---------------------------------------------------------------------------
// Charts

// Cartesian flat R^n on [-extent, extent]^n; exact radial distance |x|.
ChartedMetric flat_metric(int n, double extent = 1e4);

// dt^2 + f(t)^2 h on [t_min, t_max] x (base chart). With t_min = 0 the
// basepoint is the cap point t = 0 and the radial distance is t; otherwise
// the basepoint lies on the slice t = t_min and the radial distance is
// t - t_min.
ChartedMetric warped_metric(const WarpedProfile& profile, const std::string& name);

// dt^2 + a(t)^2 dx^2 + b(t)^2 dy^2 on [t_min, t_max] x T^2 (period 2 pi).
ChartedMetric doubly_warped_metric(const RadialFunction& a, const RadialFunction& b, double t_min,
                                   double t_max, const std::string& name);

// dt^2 + t^2 dtheta^2 in polar coordinates.
ChartedMetric flat_polar_metric();
// Unit round 2-sphere dt^2 + sin^2 t dtheta^2, pole at t = 0.
ChartedMetric round_sphere_metric();
// Hyperbolic plane dt^2 + sinh^2 t dtheta^2 for t <= t_max.
ChartedMetric hyperbolic_metric(double t_max = 300.0);
// Hyperbolic plane dt^2 + e^{2t} dx^2 on t in [-13, 40] (horocyclic chart, no
// radial structure).
ChartedMetric hyperbolic_horocyclic_metric();
// Cone dt^2 + (eps t)^2 dtheta^2.
ChartedMetric cone_metric(double eps);

// ---------------------------------------------------------------------------
// Constructions

// dt^2 + t^{2c} h over a constant-curvature base. Over the unit round
// sphere (or the circle of length 2 pi) the end is capped into R^n with the
// capped warp; other bases give the end [1, inf) x base. Values c < 1 add a
// warning.
ChartedMetric example1_end(double c, const BaseSpace& base, std::vector<std::string>* warnings = nullptr);

// The plane dt^2 + t^{2c} dtheta^2, capped at t = 1.
ChartedMetric example2_plane(double c);

// vol(B_{t_j}) = A0 (4^{j+1} - 1) / 3 at t_j = L 2^{j+1}, j = 0..j_max.
GrowthCurve example3_growth_model(double piece_area, double piece_scale, int j_max);

// A smooth one-parameter family of metrics g(t) on a fixed manifold, with
// its first two t-derivatives.
struct MetricFamily {
  int dimension = 2;
  std::function<std::array<Matrix, 3>(double)> at;
};

// diag(e_1(t), ..., e_k(t)).
MetricFamily diagonal_family(const std::vector<RadialFunction>& entries);

struct CollapseFamily {
  double f = 0.5;
  double beta = 1.0;  // log f / log(1/2)
  RadialFunction a;   // t log(1+t) t^{-beta}
  RadialFunction b;   // t log(1+t)
  MetricFamily family;  // tangential block g(t) = diag(a^2, b^2)
  ChartedMetric metric;
};

CollapseFamily collapse_family(double f);

struct FamilyConditionReport {
  double sup_first = 0.0;   // sup t ||g^{-1} g'||_inf on [t0, t1]
  double sup_second = 0.0;  // sup t^2 ||g^{-1} g''||_inf on [t0, t1]
  double sup_first_extended = 0.0;
  double sup_second_extended = 0.0;
  double slope_first = 0.0;  // slope against log t over the extended range
  double slope_second = 0.0;
  bool stable_first = false;
  bool stable_second = false;
  bool holds = false;
};

// Both suprema on [t0, t1] and on [t0, extension * t1]. A supremum is stable
// when extending the range changes it by less than 5% and the sampled
// quantity is not divergent (see divergent_series) over the extended range.
FamilyConditionReport family_condition_check(const MetricFamily& family, double t0, double t1,
                                             int samples = 400, double extension = 10.0);

// ---------------------------------------------------------------------------
// Conformal construction g = e^{2 phi} h over a rotationally symmetric
// surface h = dt^2 + f(t)^2 dtheta^2 with a radial exhaustion phi(t).

struct ConformalConditions {
  double phi_excess = 0.0;  // max (phi - d_h), must be <= 0
  double gap = 0.0;         // max (d_h - phi)
  double gradient = 0.0;    // max |grad phi|_h
  double hessian = 0.0;     // max operator norm of Hess phi w.r.t. h
  double c_fitted = 0.0;    // max(gap, gradient, hessian)
};

struct ConformalBoundSample {
  double d_h = 0.0;
  double phi = 0.0;
  double log_distance = 0.0;   // log d_g(m0, m) along the radial path
  double log_bound = 0.0;      // c + phi(m)
  double log_path_bound = 0.0; // log(e^{d_h} - 1)
};

struct ConformalConstruction {
  ChartedMetric metric;
  ConformalConditions conditions;
  std::vector<ConformalBoundSample> bound_samples;
  bool distance_bound_ok = false;
  // (d_h, |K_g| d_g^2) computed as W rho^2 with W = e^{2 phi}|K_g| from the
  // conformal formula in the h-frame and rho = e^{-phi} d_g.
  std::vector<std::pair<double, double>> weighted_decay;
  double C_fitted = 0.0;
  bool divergent = false;
  // Largest relative difference between W rho^2 and the generic engine
  // applied to g at h-radii <= 20.
  double generic_agreement = 0.0;
};

// Radii are h-distances from the cap point. With enforce_conditions the
// construction throws ConstructionError when phi > d_h or c_fitted > c_max.
ConformalConstruction conformal_quadratic_construction(const WarpedProfile& h,
                                                       const RadialFunction& phi,
                                                       const std::vector<double>& radii,
                                                       double c_max = 2.0,
                                                       bool enforce_conditions = true);

// phi(t) = sqrt(1 + t^2) - 1, a smoothed distance from the cap point.
RadialFunction smoothed_distance();

// ---------------------------------------------------------------------------

struct GalleryEntry {
  std::string name;
  std::string parameters;
  std::string description;
};

std::vector<GalleryEntry> gallery_catalog();

}  // namespace qdecay
