#pragma once

// Distances from the basepoint, ball volumes and the decay / growth
// diagnostics built on them.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdecay/curvature.hpp"
#include "qdecay/growth_curve.hpp"
#include "qdecay/metric.hpp"

namespace qdecay {

// ---------------------------------------------------------------------------
// Geodesics

struct GeodesicPath {
  std::vector<double> arc;  // arc length at each accepted step
  std::vector<Point> x;
  std::vector<Vector> velocity;
  bool exited = false;      // integration stopped at the chart boundary
  double max_speed_defect = 0.0;  // max |g(x', x') - 1|
};

// Unit-speed geodesic from p with initial g-unit velocity v, integrated with
// an adaptive Dormand-Prince stepper up to the given length.
GeodesicPath geodesic_trace(const ChartedMetric& metric, const Point& p, const Vector& v,
                            double length, double tolerance = 1e-11);

// ---------------------------------------------------------------------------
// Distances

enum class DistanceMethod { radial, graph, shoot };

std::string to_string(DistanceMethod method);
DistanceMethod parse_distance_method(const std::string& name);

struct GraphOptions {
  double spacing = 0.05;      // coordinate grid step
  std::optional<Box> region;  // defaults to the chart box
  std::size_t max_nodes = 2'000'000;
};

// Dijkstra distances from the basepoint on a coordinate grid. Each node is
// joined to the nodes reached by primitive integer steps of bounded size, and
// an edge has the length of the coordinate segment measured with the average
// of the endpoint metrics. The metric must outlive the field.
class DistanceField {
 public:
  DistanceField(const ChartedMetric& metric, GraphOptions options);

  // Distance to an arbitrary point of the region through the grid nodes
  // near its cell.
  double operator()(const Point& p) const;
  std::size_t node_count() const { return dist_.size(); }
  const Box& region() const { return region_; }

 private:
  std::size_t node_index(const std::vector<long>& idx) const;
  Point node_point(const std::vector<long>& idx) const;
  double segment_length(const Matrix& ga, const Matrix& gb, const Vector& delta) const;

  int n_;
  Box region_;
  std::vector<long> counts_;
  std::vector<double> step_;
  std::vector<double> dist_;
  const ChartedMetric* metric_;
};

struct ShootOptions {
  int max_iterations = 40;
  double tolerance = 1e-10;
};

struct DistanceOptions {
  std::vector<DistanceMethod> methods{DistanceMethod::radial};
  GraphOptions graph;
  ShootOptions shoot;
};

// Minimum over the requested methods of d(m0, m).
double distance_estimate(const ChartedMetric& metric, const Point& m,
                         const DistanceOptions& options = {});

// Length of the geodesic from the basepoint to m found by Newton iteration on
// the initial velocity. Throws BudgetError when Newton does not converge.
double shoot_distance(const ChartedMetric& metric, const Point& m, const ShootOptions& options);

// ---------------------------------------------------------------------------
// Ball volumes

struct VolumeEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct VolumeOptions {
  VolumeMethod method = VolumeMethod::quadrature;
  std::size_t mc_budget = 200'000;
  std::uint64_t seed = 1;
  int tasks = 8;
  std::optional<Box> region;  // Monte Carlo sampling box
  DistanceOptions distance;
};

VolumeEstimate ball_volume(const ChartedMetric& metric, double t, const VolumeOptions& options = {});

// vol(B_t) on increasing radii. Monte Carlo curves reuse one sample set for
// every radius, so they are nondecreasing by construction.
GrowthCurve growth_curve(const ChartedMetric& metric, const std::vector<double>& radii,
                         const VolumeOptions& options = {});

// Chart box that contains B_t for the given metric, when one is known.
std::optional<Box> ball_region(const ChartedMetric& metric, double t);

// ---------------------------------------------------------------------------
// Curvature decay

struct DecaySample {
  Point point;
  Vector v;
  Vector w;
  double curvature = 0.0;
  double distance = 0.0;
};

struct DecayOptions {
  std::vector<double> radii;
  int points_per_radius = 4;
  int planes_per_point = 3;  // random planes, in addition to the coordinate planes
  std::uint64_t seed = 1;
  double r_min = 5.0;
  DistanceOptions distance;
};

struct DecayReport {
  std::vector<DecaySample> samples;
  double C_fitted = 0.0;  // max |K| d^2
  double C_lower = 0.0;   // max (-K) d^2, clipped at 0
  // Per sampled radius: max |K| d^2 and max (-K) d^2.
  std::vector<std::pair<double, double>> per_radius;
  std::vector<std::pair<double, double>> per_radius_lower;
  double slope = 0.0;        // d(max |K| d^2) / d(log t)
  double lower_slope = 0.0;
  bool divergent = false;
  bool lower_divergent = false;
};

// The slope of a per-radius series against log t and the rule that calls it
// divergent: slope > 0.1 * max(1, mean of the series).
double log_slope(const std::vector<std::pair<double, double>>& series);
bool divergent_series(const std::vector<std::pair<double, double>>& series);

DecayReport decay_constant(const ChartedMetric& metric, const DecayOptions& options);

struct LowerDecayReport {
  double C_lower = 0.0;
  bool divergent = false;
  double slope = 0.0;
  std::vector<std::pair<double, double>> per_radius;
};

LowerDecayReport lower_decay_check(const ChartedMetric& metric, const DecayOptions& options);

// ---------------------------------------------------------------------------
// Volume growth

struct SlowGrowthReport {
  std::vector<std::pair<double, double>> ratio;  // (t, vol(B_t) / t^n)
  double reference_t = 0.0;
  double reference_ratio = 0.0;
  double liminf_estimate = 0.0;  // min ratio over the top decade
  std::vector<std::pair<double, double>> witness;  // decreasing ratio subsequence
  bool slow = false;
};

// Requires two decades of radii. The reference ratio is taken at the first
// radius >= 10 t_min.
SlowGrowthReport slow_growth_check(const GrowthCurve& curve, double fraction = 0.1);

// int_1^T vol(B_t) / t^n dt / t by the trapezoid rule in log t.
double growth_tail_integral(const GrowthCurve& curve);

// Least-squares slope of log vol against log t over samples with t >= t_from.
double loglog_slope(const GrowthCurve& curve, double t_from = 0.0);

// ---------------------------------------------------------------------------
// Gauss-Bonnet on capped surfaces dt^2 + f(t)^2 dtheta^2

struct GaussBonnetReport {
  double T = 0.0;
  double boundary_total = 0.0;  // 1 - f'(T)
  double area_total = 0.0;      // (1/2pi) int_{B_T} K dA from the curvature engine
  double agreement = 0.0;       // |boundary_total - area_total|
};

GaussBonnetReport gauss_bonnet_disk(const ChartedMetric& metric, double T);

}  // namespace qdecay
