#pragma once

// Chart-local Riemannian metrics and pointwise metric algebra.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdecay/errors.hpp"
#include "qdecay/jet.hpp"

namespace qdecay {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Coordinate box of a chart. Periodic axes (angles) are never bounds-checked.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> periodic;

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const Point& p) const;
  double width(int axis) const { return upper[axis] - lower[axis]; }
  double volume() const;

  static Box cube(int n, double lo, double hi);
};

// g, its first partials dg[k] = d_k g and second partials
// d2g[k * n + l] = d_k d_l g at one chart point.
struct MetricDerivatives {
  Matrix g;
  std::vector<Matrix> dg;
  std::vector<Matrix> d2g;
};

struct WarpedProfile;

// Extra structure carried by metrics that are rotationally symmetric about
// their basepoint (or products of such with flat factors). It makes the
// "radial" distance method exact and enables 1D ball-volume quadrature.
struct RadialStructure {
  std::function<double(const Point&)> distance;
  // Area of the distance sphere S_s; empty when unknown.
  std::function<double(double)> sphere_area;
  // A chart point at distance s from the basepoint (random angular part).
  std::function<Point(double, std::mt19937_64&)> point_at;
  // A chart box containing B_s; empty when unknown.
  std::function<Box(double)> ball_box;
  // Present when the metric is dt^2 + f(t)^2 h built from a warp profile.
  std::shared_ptr<const WarpedProfile> profile;
};

class ChartedMetric {
 public:
  using ComponentFn = std::function<Matrix(const Point&)>;
  using DerivativeFn = std::function<MetricDerivatives(const Point&)>;

  static constexpr double kDefaultStep = 1e-5;

  ChartedMetric(std::string name, Box domain, Point basepoint, ComponentFn components,
                DerivativeFn closed_form = {}, double fd_step = kDefaultStep);

  // Builds a metric from a templated expression `expr(x) -> n*n row-major
  // components`, evaluated on doubles for values and on jets for exact
  // derivatives.
  template <class Expr>
  static ChartedMetric from_expression(std::string name, Box domain, Point basepoint,
                                       Expr expr);

  const std::string& name() const { return name_; }
  int dimension() const { return domain_.dimension(); }
  const Box& domain() const { return domain_; }
  const Point& basepoint() const { return basepoint_; }
  double fd_step() const { return fd_step_; }
  bool has_closed_form_derivatives() const { return static_cast<bool>(closed_form_); }
  const std::optional<RadialStructure>& radial() const { return radial_; }

  // Raw components; no domain or validity checks.
  Matrix components(const Point& p) const { return components_(p); }

  // Closed-form derivatives when available, otherwise fourth-order central
  // differences: first partials with step fd_step * scale, second partials
  // with 100 * fd_step * scale, scale = max(1, |x_k|).
  MetricDerivatives derivatives(const Point& p) const;

  ChartedMetric with_radial(RadialStructure radial) const;
  ChartedMetric with_fd_step(double step) const;
  ChartedMetric without_closed_form() const;
  // The metric factor * g. Radial distances scale by sqrt(factor).
  ChartedMetric scaled(double factor) const;

 private:
  std::string name_;
  Box domain_;
  Point basepoint_;
  ComponentFn components_;
  DerivativeFn closed_form_;
  double fd_step_;
  std::optional<RadialStructure> radial_;
};

// Validated g_ij(p): throws DomainError outside the chart and
// MetricValidityError when not symmetric positive definite.
Matrix eval_metric(const ChartedMetric& metric, const Point& p);

// sqrt(det g(p)).
double volume_density(const ChartedMetric& metric, const Point& p);

// Checks symmetry and positive definiteness of g at p (throws on failure).
void validate_components(const Matrix& g, const Point& p);

inline double inner(const Matrix& g, const Vector& a, const Vector& b) {
  return a.dot(g * b);
}

// A g-orthonormal pair spanning a 2-plane of T_pM.
struct TwoPlane {
  Point point;
  Vector v;
  Vector w;
};

// Gram-Schmidt of (v, w) with respect to g(p).
TwoPlane orthonormal_plane(const ChartedMetric& metric, const Point& p, const Vector& v,
                           const Vector& w);

// ---------------------------------------------------------------------------

template <class Expr>
ChartedMetric ChartedMetric::from_expression(std::string name, Box domain, Point basepoint,
                                             Expr expr) {
  const int n = domain.dimension();
  ComponentFn components = [expr, n](const Point& p) {
    std::vector<double> x(p.data(), p.data() + n);
    const std::vector<double> c = expr(x);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = c[i * n + j];
    return g;
  };
  DerivativeFn closed_form = [expr, n](const Point& p) {
    const std::vector<Jet> x = seed_jets(p, n);
    const std::vector<Jet> c = expr(x);
    MetricDerivatives out;
    out.g = Matrix(n, n);
    out.dg.assign(n, Matrix(n, n));
    out.d2g.assign(n * n, Matrix(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Jet& e = c[i * n + j];
        out.g(i, j) = e.v;
        for (int k = 0; k < n; ++k) {
          out.dg[k](i, j) = e.d[k];
          for (int l = 0; l < n; ++l) out.d2g[k * n + l](i, j) = e.hess(k, l);
        }
      }
    return out;
  };
  return ChartedMetric(std::move(name), std::move(domain), std::move(basepoint),
                       std::move(components), std::move(closed_form));
}

}  // namespace qdecay
