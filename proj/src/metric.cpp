#include "qdecay/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdecay {

namespace {

std::string format_point(const Point& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

// Fourth-order central difference weights for offsets -2, -1, +1, +2.
constexpr double kOffsets[4] = {-2.0, -1.0, 1.0, 2.0};
constexpr double kWeights[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

}  // namespace

bool Box::contains(const Point& p) const {
  if (p.size() != dimension()) return false;
  for (int i = 0; i < dimension(); ++i) {
    if (periodic[i]) continue;
    if (!(p[i] >= lower[i] && p[i] <= upper[i])) return false;
  }
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dimension(); ++i) v *= width(i);
  return v;
}

Box Box::cube(int n, double lo, double hi) {
  return Box{std::vector<double>(n, lo), std::vector<double>(n, hi),
             std::vector<bool>(n, false)};
}

ChartedMetric::ChartedMetric(std::string name, Box domain, Point basepoint,
                             ComponentFn components, DerivativeFn closed_form,
                             double fd_step)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      basepoint_(std::move(basepoint)),
      components_(std::move(components)),
      closed_form_(std::move(closed_form)),
      fd_step_(fd_step) {
  if (domain_.dimension() < 2) throw ParameterError("metric dimension must be >= 2");
  if (static_cast<int>(domain_.upper.size()) != dimension() ||
      static_cast<int>(domain_.periodic.size()) != dimension())
    throw ShapeError("inconsistent chart box");
  if (basepoint_.size() != dimension() || !domain_.contains(basepoint_))
    throw DomainError("basepoint " + format_point(basepoint_) + " outside chart of " + name_);
  if (!(fd_step_ > 0.0)) throw ParameterError("finite-difference step must be positive");
}

MetricDerivatives ChartedMetric::derivatives(const Point& p) const {
  if (closed_form_) return closed_form_(p);

  const int n = dimension();
  MetricDerivatives out;
  out.g = components_(p);
  out.dg.assign(n, Matrix::Zero(n, n));
  out.d2g.assign(n * n, Matrix::Zero(n, n));

  std::vector<double> h1(n), h2(n);
  for (int k = 0; k < n; ++k) {
    const double scale = std::max(1.0, std::abs(p[k]));
    h1[k] = fd_step_ * scale;
    h2[k] = 100.0 * fd_step_ * scale;
    if (!domain_.periodic[k] &&
        (p[k] - 2.0 * h2[k] < domain_.lower[k] || p[k] + 2.0 * h2[k] > domain_.upper[k]))
      throw DomainError("finite-difference stencil leaves the chart at " + format_point(p));
  }

  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < 4; ++a) {
      Point q = p;
      q[k] += kOffsets[a] * h1[k];
      out.dg[k] += (kWeights[a] / h1[k]) * components_(q);
    }
  }
  // Nested fourth-order stencil; symmetric in (k, l) by construction.
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      Matrix acc = Matrix::Zero(n, n);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          Point q = p;
          q[k] += kOffsets[a] * h2[k];
          q[l] += kOffsets[b] * h2[l];
          acc += (kWeights[a] * kWeights[b]) * components_(q);
        }
      }
      acc /= (h2[k] * h2[l]);
      out.d2g[k * n + l] = acc;
      out.d2g[l * n + k] = acc;
    }
  }
  return out;
}

ChartedMetric ChartedMetric::with_radial(RadialStructure radial) const {
  ChartedMetric copy = *this;
  copy.radial_ = std::move(radial);
  return copy;
}

ChartedMetric ChartedMetric::with_fd_step(double step) const {
  if (!(step > 0.0)) throw ParameterError("finite-difference step must be positive");
  ChartedMetric copy = *this;
  copy.fd_step_ = step;
  return copy;
}

ChartedMetric ChartedMetric::without_closed_form() const {
  ChartedMetric copy = *this;
  copy.closed_form_ = {};
  return copy;
}

ChartedMetric ChartedMetric::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("metric scale factor must be positive");
  ChartedMetric copy = *this;
  copy.name_ = name_ + "*scaled";
  auto base = components_;
  copy.components_ = [base, factor](const Point& p) { Matrix g = base(p); return Matrix(factor * g); };
  if (closed_form_) {
    auto cf = closed_form_;
    copy.closed_form_ = [cf, factor](const Point& p) {
      MetricDerivatives d = cf(p);
      d.g *= factor;
      for (auto& m : d.dg) m *= factor;
      for (auto& m : d.d2g) m *= factor;
      return d;
    };
  }
  if (radial_) {
    const double s = std::sqrt(factor);
    const int n = dimension();
    RadialStructure r;
    if (radial_->distance) {
      auto dist = radial_->distance;
      r.distance = [dist, s](const Point& p) { return s * dist(p); };
    }
    if (radial_->sphere_area) {
      auto area = radial_->sphere_area;
      r.sphere_area = [area, s, n](double t) { return std::pow(s, n - 1) * area(t / s); };
    }
    if (radial_->point_at) {
      auto at = radial_->point_at;
      r.point_at = [at, s](double t, std::mt19937_64& rng) { return at(t / s, rng); };
    }
    copy.radial_ = std::move(r);
  }
  return copy;
}

void validate_components(const Matrix& g, const Point& p) {
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (!g.allFinite())
    throw MetricValidityError("non-finite metric components at " + format_point(p));
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw MetricValidityError("metric not symmetric at " + format_point(p));
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0))
    throw MetricValidityError("metric not positive definite at " + format_point(p));
}

Matrix eval_metric(const ChartedMetric& metric, const Point& p) {
  if (p.size() != metric.dimension() || !metric.domain().contains(p))
    throw DomainError("point " + format_point(p) + " outside chart of " + metric.name());
  Matrix g = metric.components(p);
  validate_components(g, p);
  return g;
}

double volume_density(const ChartedMetric& metric, const Point& p) {
  const Matrix g = eval_metric(metric, p);
  const double det = g.determinant();
  if (!(det > 0.0)) throw MetricValidityError("non-positive determinant at " + format_point(p));
  return std::sqrt(det);
}

TwoPlane orthonormal_plane(const ChartedMetric& metric, const Point& p, const Vector& v,
                           const Vector& w) {
  const Matrix g = eval_metric(metric, p);
  if (v.size() != metric.dimension() || w.size() != metric.dimension())
    throw ShapeError("tangent vectors must match the chart dimension");
  const double vv = inner(g, v, v);
  const double ww = inner(g, w, w);
  if (!(vv > 0.0) || !(ww > 0.0)) throw DegeneracyError("zero spanning vector");
  const double vw = inner(g, v, w);
  // Squared sine of the g-angle between v and w.
  const double sin2 = 1.0 - vw * vw / (vv * ww);
  if (!(sin2 > 1e-24)) throw DegeneracyError("spanning vectors are parallel");
  TwoPlane out;
  out.point = p;
  out.v = v / std::sqrt(vv);
  Vector w_perp = w - inner(g, out.v, w) * out.v;
  // A second projection pass removes the residual overlap left by rounding.
  w_perp -= inner(g, out.v, w_perp) * out.v;
  out.w = w_perp / std::sqrt(inner(g, w_perp, w_perp));
  return out;
}

}  // namespace qdecay
