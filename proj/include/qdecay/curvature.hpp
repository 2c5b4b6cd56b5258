#pragma once

// Christoffel symbols, the Riemann tensor and its sectional/Ricci traces,
// plus the closed-form curvature of conformal changes and warped products.
//
// Index convention:
//   R^i_{jkl} = d_k G^i_{jl} - d_l G^i_{jk} + G^i_{km} G^m_{jl} - G^i_{lm} G^m_{jk},
//   R_{ijkl}  = g_{im} R^m_{jkl},
//   K(v, w)   = R_{ijkl} v^i w^j v^k w^l / (|v|^2 |w|^2 - <v,w>^2),
// which gives K = +1 on the unit round sphere.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qdecay/metric.hpp"

namespace qdecay {

// G^i_{jk}, stored at i*n*n + j*n + k.
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n), data_(n * n * n, 0.0) {}
  int dimension() const { return n_; }
  double operator()(int i, int j, int k) const { return data_[(i * n_ + j) * n_ + k]; }
  double& operator()(int i, int j, int k) { return data_[(i * n_ + j) * n_ + k]; }

 private:
  int n_;
  std::vector<double> data_;
};

class CurvatureTensor {
 public:
  CurvatureTensor(Point point, const Matrix& g, std::vector<double> up);

  int dimension() const { return n_; }
  const Point& point() const { return point_; }
  double up(int i, int j, int k, int l) const { return up_[index(i, j, k, l)]; }
  double down(int i, int j, int k, int l) const { return down_[index(i, j, k, l)]; }
  const std::vector<double>& up_components() const { return up_; }
  const std::vector<double>& down_components() const { return down_; }

  double max_abs_down() const;
  // Largest violation of R_ijkl = -R_jikl = -R_ijlk = R_klij relative to max|R|.
  double symmetry_defect() const;
  // Largest |R_ijkl + R_iklj + R_iljk| relative to max|R|.
  double bianchi_defect() const;

 private:
  int index(int i, int j, int k, int l) const { return ((i * n_ + j) * n_ + k) * n_ + l; }

  int n_;
  Point point_;
  std::vector<double> up_;
  std::vector<double> down_;
};

Christoffel christoffel_from(const MetricDerivatives& d);
Christoffel christoffel(const ChartedMetric& metric, const Point& p);

CurvatureTensor riemann_from(const MetricDerivatives& d, const Point& p);
CurvatureTensor riemann(const ChartedMetric& metric, const Point& p);

// Sectional curvature of span(v, w) for any basis of the plane.
double sectional(const CurvatureTensor& r, const Matrix& g, const Vector& v, const Vector& w);
double sectional(const ChartedMetric& metric, const TwoPlane& plane);

// Ric(v, v) = R^i_{jil} v^j v^l; v must be g-unit within 1e-10.
double ricci(const CurvatureTensor& r, const Matrix& g, const Vector& v);
double ricci(const ChartedMetric& metric, const Point& p, const Vector& v);

// ---------------------------------------------------------------------------
// Conformal changes g = e^{2 phi} h.

// A smooth function on a chart, evaluable on doubles and on jets.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Jet(const std::vector<Jet>&)> jet;

  template <class Expr>
  static ScalarField from_expression(Expr expr) {
    ScalarField f;
    f.value = [expr](const Point& p) {
      std::vector<double> x(p.data(), p.data() + p.size());
      return static_cast<double>(expr(x));
    };
    f.jet = [expr](const std::vector<Jet>& x) { return Jet(expr(x)); };
    return f;
  }
};

// phi, phi_{;a} and the h-covariant Hessian phi_{;ab} at one point.
struct ConformalData {
  double phi = 0.0;
  Vector gradient;
  Matrix hessian;
};

ConformalData conformal_data(const ChartedMetric& h, const ScalarField& phi, const Point& p);

// R^i_{jkl}(e^{2 phi} h) from R(h), h(p) and the conformal data; the result
// is lowered with g = e^{2 phi} h.
CurvatureTensor conformal_riemann(const CurvatureTensor& h_curvature, const Matrix& h,
                                  const ConformalData& data);

// The metric e^{2 phi} h with closed-form derivatives from the product rule.
ChartedMetric conformal_metric(const ChartedMetric& h, const ScalarField& phi,
                               std::string name);

// ---------------------------------------------------------------------------
// Warped products dt^2 + f(t)^2 h over a constant-curvature base.

// (f, f', f'') at t.
using RadialFunction = std::function<std::array<double, 3>(double)>;

struct BaseSpace {
  int dimension = 1;
  double curvature = 0.0;  // K_h
  double volume = 0.0;     // total volume of the closed base

  static BaseSpace circle(double length = 2.0 * 3.14159265358979323846);
  static BaseSpace round_sphere(int dimension, double curvature = 1.0);
  static BaseSpace flat_torus(int dimension, double period = 2.0 * 3.14159265358979323846);
  // Closed hyperbolic surface of genus 2 (area 4 pi / |K|), dimension 2 only.
  static BaseSpace hyperbolic_surface(double curvature = -1.0);
};

struct WarpedProfile {
  RadialFunction warp;
  BaseSpace base;
  double t_min = 0.0;
  double t_max = 1e12;
  // Second warp pair (a, b) for doubly-warped torus ends dt^2 + a^2 dx^2 + b^2 dy^2.
  std::optional<std::pair<RadialFunction, RadialFunction>> torus_warps;

  double f(double t) const { return warp(t)[0]; }
  double df(double t) const { return warp(t)[1]; }
  double d2f(double t) const { return warp(t)[2]; }
};

struct WarpedCurvatures {
  double radial = 0.0;                 // K(d_t, X)
  std::optional<double> tangential;    // K(X, Y), base dimension >= 2
};

WarpedCurvatures warped_sectional(const WarpedProfile& profile, double t);

struct DoublyWarpedCurvatures {
  double ta = 0.0;
  double tb = 0.0;
  double ab = 0.0;
};

DoublyWarpedCurvatures doubly_warped_sectional(const RadialFunction& a, const RadialFunction& b,
                                               double t);

// Lifts a radial function to a jet argument (chain rule).
inline Jet lift(const Jet& t, const RadialFunction& f) {
  const auto v = f(t.v);
  return apply(t, v[0], v[1], v[2]);
}
inline double lift(double t, const RadialFunction& f) { return f(t)[0]; }

// Templated radial function -> closed-form triple via one-dimensional jets.
template <class F>
RadialFunction make_radial_function(F fn) {
  return [fn](double t) { return derivatives_1d(fn, t); };
}

}  // namespace qdecay
