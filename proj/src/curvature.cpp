#include "qdecay/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdecay {

CurvatureTensor::CurvatureTensor(Point point, const Matrix& g, std::vector<double> up)
    : n_(static_cast<int>(g.rows())), point_(std::move(point)), up_(std::move(up)) {
  if (static_cast<int>(up_.size()) != n_ * n_ * n_ * n_)
    throw ShapeError("curvature table size does not match metric dimension");
  down_.assign(up_.size(), 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          double s = 0.0;
          for (int m = 0; m < n_; ++m) s += g(i, m) * up_[index(m, j, k, l)];
          down_[index(i, j, k, l)] = s;
        }
}

double CurvatureTensor::max_abs_down() const {
  double m = 0.0;
  for (double x : down_) m = std::max(m, std::abs(x));
  return m;
}

double CurvatureTensor::symmetry_defect() const {
  const double scale = max_abs_down();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          const double r = down(i, j, k, l);
          worst = std::max({worst, std::abs(r + down(j, i, k, l)),
                            std::abs(r + down(i, j, l, k)), std::abs(r - down(k, l, i, j))});
        }
  return worst / scale;
}

double CurvatureTensor::bianchi_defect() const {
  const double scale = max_abs_down();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l)
          worst = std::max(worst,
                           std::abs(down(i, j, k, l) + down(i, k, l, j) + down(i, l, j, k)));
  return worst / scale;
}

Christoffel christoffel_from(const MetricDerivatives& d) {
  const int n = static_cast<int>(d.g.rows());
  const Matrix ginv = d.g.inverse();
  Christoffel gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += ginv(i, m) * (d.dg[j](m, k) + d.dg[k](m, j) - d.dg[m](j, k));
        gamma(i, j, k) = 0.5 * s;
        gamma(i, k, j) = 0.5 * s;
      }
  return gamma;
}

Christoffel christoffel(const ChartedMetric& metric, const Point& p) {
  eval_metric(metric, p);
  return christoffel_from(metric.derivatives(p));
}

CurvatureTensor riemann_from(const MetricDerivatives& d, const Point& p) {
  const int n = static_cast<int>(d.g.rows());
  const Matrix ginv = d.g.inverse();
  const Christoffel gamma = christoffel_from(d);

  // First-kind combination S_{mjk} = d_j g_mk + d_k g_mj - d_m g_jk.
  auto first_kind = [&](int m, int j, int k) {
    return d.dg[j](m, k) + d.dg[k](m, j) - d.dg[m](j, k);
  };
  // dgamma[l][i][j][k] = d_l G^i_{jk}.
  std::vector<double> dgamma(n * n * n * n, 0.0);
  auto dg_at = [&](int l, int i, int j, int k) -> double& {
    return dgamma[((l * n + i) * n + j) * n + k];
  };
  for (int l = 0; l < n; ++l) {
    const Matrix dginv = -ginv * d.dg[l] * ginv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            const double second = d.d2g[l * n + j](m, k) + d.d2g[l * n + k](m, j) -
                                  d.d2g[l * n + m](j, k);
            s += dginv(i, m) * first_kind(m, j, k) + ginv(i, m) * second;
          }
          dg_at(l, i, j, k) = 0.5 * s;
          dg_at(l, i, k, j) = 0.5 * s;
        }
  }

  std::vector<double> up(n * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = dg_at(k, i, j, l) - dg_at(l, i, j, k);
          for (int m = 0; m < n; ++m)
            r += gamma(i, k, m) * gamma(m, j, l) - gamma(i, l, m) * gamma(m, j, k);
          up[((i * n + j) * n + k) * n + l] = r;
        }
  return CurvatureTensor(p, d.g, std::move(up));
}

CurvatureTensor riemann(const ChartedMetric& metric, const Point& p) {
  eval_metric(metric, p);
  return riemann_from(metric.derivatives(p), p);
}

double sectional(const CurvatureTensor& r, const Matrix& g, const Vector& v, const Vector& w) {
  const int n = r.dimension();
  const double area2 = inner(g, v, v) * inner(g, w, w) - std::pow(inner(g, v, w), 2);
  if (!(area2 > 1e-24 * inner(g, v, v) * inner(g, w, w)))
    throw DegeneracyError("degenerate 2-plane");
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += r.down(i, j, k, l) * v[i] * w[j] * v[k] * w[l];
  return s / area2;
}

double sectional(const ChartedMetric& metric, const TwoPlane& plane) {
  const Matrix g = eval_metric(metric, plane.point);
  return sectional(riemann(metric, plane.point), g, plane.v, plane.w);
}

double ricci(const CurvatureTensor& r, const Matrix& g, const Vector& v) {
  if (std::abs(inner(g, v, v) - 1.0) > 1e-10)
    throw NormalizationError("Ricci direction is not a unit vector");
  const int n = r.dimension();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) s += r.up(i, j, i, l) * v[j] * v[l];
  return s;
}

double ricci(const ChartedMetric& metric, const Point& p, const Vector& v) {
  const Matrix g = eval_metric(metric, p);
  return ricci(riemann(metric, p), g, v);
}

// ---------------------------------------------------------------------------

ConformalData conformal_data(const ChartedMetric& h, const ScalarField& phi, const Point& p) {
  const int n = h.dimension();
  eval_metric(h, p);
  const Jet f = phi.jet(seed_jets(p, n));
  const Christoffel gamma = christoffel_from(h.derivatives(p));
  ConformalData out;
  out.phi = f.v;
  out.gradient = Vector(n);
  out.hessian = Matrix(n, n);
  for (int a = 0; a < n; ++a) out.gradient[a] = f.d[a];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = f.hess(a, b);
      for (int c = 0; c < n; ++c) s -= gamma(c, a, b) * f.d[c];
      out.hessian(a, b) = s;
    }
  return out;
}

CurvatureTensor conformal_riemann(const CurvatureTensor& h_curvature, const Matrix& h,
                                  const ConformalData& data) {
  const int n = h_curvature.dimension();
  if (h.rows() != n || data.gradient.size() != n || data.hessian.rows() != n ||
      data.hessian.cols() != n)
    throw ShapeError("conformal data and curvature dimensions differ");
  const Matrix hinv = h.inverse();
  const Matrix tilde = data.hessian - data.gradient * data.gradient.transpose();
  const Matrix tilde_up = hinv * tilde;  // tilde^i_k
  const double grad2 = data.gradient.dot(hinv * data.gradient);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  std::vector<double> up(h_curvature.up_components());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = h_curvature.up(i, j, k, l);
          r += -tilde_up(i, k) * h(j, l) + tilde_up(i, l) * h(j, k) -
               delta(i, k) * tilde(j, l) + delta(i, l) * tilde(j, k) -
               grad2 * (delta(i, k) * h(j, l) - delta(i, l) * h(j, k));
          up[((i * n + j) * n + k) * n + l] = r;
        }
  const Matrix g = std::exp(2.0 * data.phi) * h;
  return CurvatureTensor(h_curvature.point(), g, std::move(up));
}

ChartedMetric conformal_metric(const ChartedMetric& h, const ScalarField& phi, std::string name) {
  const int n = h.dimension();
  ChartedMetric::ComponentFn components = [h, phi](const Point& p) {
    return Matrix(std::exp(2.0 * phi.value(p)) * h.components(p));
  };
  ChartedMetric::DerivativeFn derivs = [h, phi, n](const Point& p) {
    const MetricDerivatives hd = h.derivatives(p);
    const Jet f = phi.jet(seed_jets(p, n));
    const double e = std::exp(2.0 * f.v);
    MetricDerivatives out;
    out.g = e * hd.g;
    out.dg.resize(n);
    out.d2g.resize(n * n);
    for (int k = 0; k < n; ++k) out.dg[k] = e * (2.0 * f.d[k] * hd.g + hd.dg[k]);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        out.d2g[k * n + l] =
            e * ((4.0 * f.d[k] * f.d[l] + 2.0 * f.hess(k, l)) * hd.g + 2.0 * f.d[k] * hd.dg[l] +
                 2.0 * f.d[l] * hd.dg[k] + hd.d2g[k * n + l]);
    return out;
  };
  return ChartedMetric(std::move(name), h.domain(), h.basepoint(), std::move(components),
                       std::move(derivs), h.fd_step());
}

// ---------------------------------------------------------------------------

BaseSpace BaseSpace::circle(double length) { return BaseSpace{1, 0.0, length}; }

BaseSpace BaseSpace::round_sphere(int dimension, double curvature) {
  if (!(curvature > 0.0)) throw ParameterError("round sphere needs positive curvature");
  // vol(S^m) of the unit sphere: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
  const double m = dimension;
  const double unit = 2.0 * std::pow(std::numbers::pi, (m + 1.0) / 2.0) / std::tgamma((m + 1.0) / 2.0);
  return BaseSpace{dimension, curvature, unit * std::pow(curvature, -m / 2.0)};
}

BaseSpace BaseSpace::flat_torus(int dimension, double period) {
  return BaseSpace{dimension, 0.0, std::pow(period, dimension)};
}

BaseSpace BaseSpace::hyperbolic_surface(double curvature) {
  if (!(curvature < 0.0)) throw ParameterError("hyperbolic base needs negative curvature");
  return BaseSpace{2, curvature, 4.0 * std::numbers::pi / std::abs(curvature)};
}

WarpedCurvatures warped_sectional(const WarpedProfile& profile, double t) {
  const auto [f, df, d2f] = profile.warp(t);
  if (!(f > 0.0)) throw ProfileError("warp function is not positive at t = " + std::to_string(t));
  WarpedCurvatures k;
  k.radial = -d2f / f;
  if (profile.base.dimension >= 2) k.tangential = (profile.base.curvature - df * df) / (f * f);
  return k;
}

DoublyWarpedCurvatures doubly_warped_sectional(const RadialFunction& a, const RadialFunction& b,
                                               double t) {
  const auto [av, da, d2a] = a(t);
  const auto [bv, db, d2b] = b(t);
  if (!(av > 0.0) || !(bv > 0.0))
    throw ProfileError("doubly-warped factor is not positive at t = " + std::to_string(t));
  return DoublyWarpedCurvatures{-d2a / av, -d2b / bv, -da * db / (av * bv)};
}

}  // namespace qdecay
