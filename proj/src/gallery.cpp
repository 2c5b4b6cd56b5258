#include "qdecay/gallery.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "qdecay/growth.hpp"
#include "qdecay/quadrature.hpp"
#include "qdecay/smooth.hpp"

namespace qdecay {

namespace {

constexpr double kPi = std::numbers::pi;

std::string label(const std::string& name, const std::string& key, double value) {
  std::ostringstream os;
  os.precision(6);
  os << name << "(" << key << "=" << value << ")";
  return os.str();
}

Point random_in_box(const Box& box, double t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point p(box.dimension());
  p[0] = t;
  for (int i = 1; i < box.dimension(); ++i) p[i] = box.lower[i] + box.width(i) * unit(rng);
  return p;
}

enum class BaseChart { circle, sphere, torus, hyperbolic };

}  // namespace

RadialFunction power_warp(double c) {
  return make_radial_function([c](const auto& t) { return pow(t, c); });
}

RadialFunction capped_power_warp(double c) {
  return make_radial_function([c](const auto& t) {
    using S = std::decay_t<decltype(t)>;
    const double tv = value(t);
    if (tv < 0.25) return S(t);
    if (tv >= 1.0) return S(pow(t, c));
    const S s = smooth_step((t - 0.25) * (1.0 / 0.75));
    return S((1.0 - s) * t + s * pow(t, c));
  });
}

ChartedMetric flat_metric(int n, double extent) {
  if (n < 2 || n > Jet::kMaxDim) throw ParameterError("flat metric dimension must be in [2, 4]");
  auto expr = [n](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> g(n * n, S(0.0));
    for (int i = 0; i < n; ++i) g[i * n + i] = S(1.0);
    return g;
  };
  ChartedMetric m = ChartedMetric::from_expression("flat" + std::to_string(n), Box::cube(n, -extent, extent),
                                                   Point::Zero(n), expr);
  const double sphere = 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
  RadialStructure r;
  r.distance = [](const Point& p) { return p.norm(); };
  r.ball_box = [n, extent](double s) { return Box::cube(n, -std::min(s, extent), std::min(s, extent)); };
  r.sphere_area = [sphere, n](double s) { return sphere * std::pow(s, n - 1); };
  r.point_at = [n](double s, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector u(n);
    for (int i = 0; i < n; ++i) u[i] = normal(rng);
    return Point(s * u / u.norm());
  };
  return m.with_radial(std::move(r));
}

ChartedMetric warped_metric(const WarpedProfile& profile, const std::string& name) {
  const BaseSpace& base = profile.base;
  const int m = base.dimension;
  const int n = m + 1;
  if (m < 1 || m > 3) throw ParameterError("warped base dimension must be 1, 2 or 3");
  if (!(profile.t_max > profile.t_min) || profile.t_min < 0.0)
    throw ParameterError("invalid radial range for warped metric");

  BaseChart kind;
  if (m == 1) kind = BaseChart::circle;
  else if (base.curvature > 0.0) kind = BaseChart::sphere;
  else if (base.curvature == 0.0) kind = BaseChart::torus;
  else if (m == 2) kind = BaseChart::hyperbolic;
  else throw ParameterError("no hyperbolic base chart in dimension 3");

  Box box{{profile.t_min}, {profile.t_max}, {false}};
  auto add_axis = [&](double lo, double hi, bool periodic) {
    box.lower.push_back(lo);
    box.upper.push_back(hi);
    box.periodic.push_back(periodic);
  };
  const double scale = base.curvature != 0.0 ? 1.0 / std::abs(base.curvature) : 1.0;
  switch (kind) {
    case BaseChart::circle: add_axis(0.0, base.volume, true); break;
    case BaseChart::sphere:
      for (int i = 0; i + 1 < m; ++i) add_axis(0.05, kPi - 0.05, false);
      add_axis(0.0, 2.0 * kPi, true);
      break;
    case BaseChart::torus: {
      const double period = std::pow(base.volume, 1.0 / m);
      for (int i = 0; i < m; ++i) add_axis(0.0, period, true);
      break;
    }
    case BaseChart::hyperbolic:
      add_axis(0.05, 4.0, false);
      add_axis(0.0, 2.0 * kPi, true);
      break;
  }
  Point basepoint(n);
  basepoint[0] = profile.t_min;
  for (int i = 1; i < n; ++i) basepoint[i] = 0.5 * (box.lower[i] + box.upper[i]);

  const RadialFunction warp = profile.warp;
  auto expr = [warp, kind, n, scale](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> g(n * n, S(0.0));
    const S f = lift(x[0], warp);
    const S f2 = f * f * scale;
    g[0] = S(1.0);
    switch (kind) {
      case BaseChart::circle:
      case BaseChart::torus:
        for (int i = 1; i < n; ++i) g[i * n + i] = f2;
        break;
      case BaseChart::sphere: {
        S acc = f2;
        for (int i = 1; i < n; ++i) {
          g[i * n + i] = acc;
          if (i + 1 < n) {
            const S s = sin(x[i]);
            acc = acc * s * s;
          }
        }
        break;
      }
      case BaseChart::hyperbolic: {
        const S s = sinh(x[1]);
        g[n + 1] = f2;
        g[2 * n + 2] = f2 * s * s;
        break;
      }
    }
    return g;
  };
  ChartedMetric metric = ChartedMetric::from_expression(name, box, basepoint, expr);

  auto shared = std::make_shared<const WarpedProfile>(profile);
  const double t0 = profile.t_min;
  RadialStructure r;
  r.distance = [t0](const Point& p) { return p[0] - t0; };
  r.sphere_area = [shared, t0, m](double s) {
    return std::pow(shared->f(t0 + s), m) * shared->base.volume;
  };
  r.point_at = [box, t0](double s, std::mt19937_64& rng) { return random_in_box(box, t0 + s, rng); };
  r.profile = shared;
  return metric.with_radial(std::move(r));
}

ChartedMetric doubly_warped_metric(const RadialFunction& a, const RadialFunction& b, double t_min,
                                   double t_max, const std::string& name) {
  if (!(t_max > t_min) || t_min < 0.0) throw ParameterError("invalid radial range");
  const Box box{{t_min, 0.0, 0.0}, {t_max, 2.0 * kPi, 2.0 * kPi}, {false, true, true}};
  Point basepoint(3);
  basepoint << t_min, kPi, kPi;
  auto expr = [a, b](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> g(9, S(0.0));
    const S av = lift(x[0], a);
    const S bv = lift(x[0], b);
    g[0] = S(1.0);
    g[4] = av * av;
    g[8] = bv * bv;
    return g;
  };
  ChartedMetric metric = ChartedMetric::from_expression(name, box, basepoint, expr);

  WarpedProfile profile;
  profile.warp = b;
  profile.base = BaseSpace::flat_torus(2);
  profile.t_min = t_min;
  profile.t_max = t_max;
  profile.torus_warps = std::make_pair(a, b);
  RadialStructure r;
  r.distance = [t_min](const Point& p) { return p[0] - t_min; };
  r.sphere_area = [a, b, t_min](double s) {
    return 4.0 * kPi * kPi * a(t_min + s)[0] * b(t_min + s)[0];
  };
  r.point_at = [box, t_min](double s, std::mt19937_64& rng) {
    return random_in_box(box, t_min + s, rng);
  };
  r.profile = std::make_shared<const WarpedProfile>(std::move(profile));
  return metric.with_radial(std::move(r));
}

ChartedMetric flat_polar_metric() {
  return warped_metric({make_radial_function([](const auto& t) { return t; }), BaseSpace::circle(),
                        0.0, 1e12, std::nullopt},
                       "flat-polar");
}

ChartedMetric round_sphere_metric() {
  return warped_metric({make_radial_function([](const auto& t) { return sin(t); }),
                        BaseSpace::circle(), 0.0, kPi - 1e-3, std::nullopt},
                       "sphere");
}

ChartedMetric hyperbolic_metric(double t_max) {
  if (!(t_max > 0.0 && t_max <= 350.0)) throw ParameterError("hyperbolic chart radius must be in (0, 350]");
  return warped_metric({make_radial_function([](const auto& t) { return sinh(t); }),
                        BaseSpace::circle(), 0.0, t_max, std::nullopt},
                       "hyperbolic");
}

ChartedMetric hyperbolic_horocyclic_metric() {
  auto expr = [](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    return std::vector<S>{S(1.0), S(0.0), S(0.0), exp(2.0 * x[0])};
  };
  return ChartedMetric::from_expression("hyperbolic-horocyclic",
                                        Box{{-13.0, -1e4}, {40.0, 1e4}, {false, false}},
                                        Point::Zero(2), expr);
}

ChartedMetric cone_metric(double eps) {
  if (!(eps > 0.0)) throw ParameterError("cone factor must be positive");
  return warped_metric({make_radial_function([eps](const auto& t) { return eps * t; }),
                        BaseSpace::circle(), 0.0, 1e12, std::nullopt},
                       label("cone", "eps", eps));
}

// ---------------------------------------------------------------------------

ChartedMetric example1_end(double c, const BaseSpace& base, std::vector<std::string>* warnings) {
  if (c < 1.0 && warnings)
    warnings->push_back("example1 with c = " + std::to_string(c) + " < 1 lies outside the example's range");
  const bool capped = (base.dimension == 1 && std::abs(base.volume - 2.0 * kPi) < 1e-12) ||
                      (base.dimension >= 2 && base.curvature == 1.0);
  WarpedProfile profile;
  profile.base = base;
  profile.t_max = 1e12;
  if (capped) {
    profile.warp = capped_power_warp(c);
    profile.t_min = 0.0;
  } else {
    profile.warp = power_warp(c);
    profile.t_min = 1.0;
  }
  return warped_metric(profile, label("example1", "c", c));
}

ChartedMetric example2_plane(double c) {
  return warped_metric({capped_power_warp(c), BaseSpace::circle(), 0.0, 1e12, std::nullopt},
                       label("example2", "c", c));
}

GrowthCurve example3_growth_model(double piece_area, double piece_scale, int j_max) {
  if (!(piece_area > 0.0) || !(piece_scale > 0.0)) throw ParameterError("piece area and scale must be positive");
  if (j_max < 0) throw ParameterError("j_max must be nonnegative");
  GrowthCurve curve;
  curve.n = 2;
  curve.method = VolumeMethod::model;
  for (int j = 0; j <= j_max; ++j) {
    curve.t.push_back(piece_scale * std::ldexp(1.0, j + 1));
    curve.volume.push_back(piece_area * (std::ldexp(1.0, 2 * (j + 1)) - 1.0) / 3.0);
    curve.stderr_.push_back(0.0);
  }
  return curve;
}

MetricFamily diagonal_family(const std::vector<RadialFunction>& entries) {
  MetricFamily family;
  family.dimension = static_cast<int>(entries.size());
  family.at = [entries](double t) {
    const int k = static_cast<int>(entries.size());
    std::array<Matrix, 3> out{Matrix::Zero(k, k), Matrix::Zero(k, k), Matrix::Zero(k, k)};
    for (int i = 0; i < k; ++i) {
      const auto e = entries[i](t);
      for (int d = 0; d < 3; ++d) out[d](i, i) = e[d];
    }
    return out;
  };
  return family;
}

CollapseFamily collapse_family(double f) {
  if (!(f >= 0.5 && f < 1.0)) throw ParameterError("collapse factor f must lie in [1/2, 1)");
  CollapseFamily out{f, std::log(f) / std::log(0.5), {}, {}, {}, flat_metric(3, 1.0)};
  const double beta = out.beta;
  out.a = make_radial_function([beta](const auto& t) { return log1p(t) * pow(t, 1.0 - beta); });
  out.b = make_radial_function([](const auto& t) { return t * log1p(t); });
  out.family = diagonal_family(
      {make_radial_function([beta](const auto& t) {
         const auto l = log1p(t);
         return l * l * pow(t, 2.0 - 2.0 * beta);
       }),
       make_radial_function([](const auto& t) {
         const auto l = t * log1p(t);
         return l * l;
       })});
  out.metric = doubly_warped_metric(out.a, out.b, 1.0, 1e12, label("collapse", "f", f));
  return out;
}

FamilyConditionReport family_condition_check(const MetricFamily& family, double t0, double t1,
                                             int samples, double extension) {
  if (!(t0 > 0.0) || !(t1 > t0)) throw ParameterError("family range must satisfy 0 < t0 < t1");
  if (samples < 2 || !(extension >= 1.0)) throw ParameterError("invalid family sampling");
  const double t_ext = extension * t1;
  const int count = samples + static_cast<int>(std::ceil(samples * std::log(extension) / std::log(t1 / t0)));
  const double la = std::log(t0), lb = std::log(t_ext);

  auto inf_norm = [](const Matrix& A) { return A.cwiseAbs().rowwise().sum().maxCoeff(); };
  std::vector<std::pair<double, double>> first, second;
  FamilyConditionReport r;
  for (int k = 0; k < count; ++k) {
    const double t = k + 1 == count ? t_ext : std::exp(la + (lb - la) * k / (count - 1));
    const auto [g, dg, d2g] = family.at(t);
    const Eigen::PartialPivLU<Matrix> lu(g);
    const double q1 = t * inf_norm(lu.solve(dg));
    const double q2 = t * t * inf_norm(lu.solve(d2g));
    first.emplace_back(t, q1);
    second.emplace_back(t, q2);
    if (t <= t1 * (1.0 + 1e-12)) {
      r.sup_first = std::max(r.sup_first, q1);
      r.sup_second = std::max(r.sup_second, q2);
    }
    r.sup_first_extended = std::max(r.sup_first_extended, q1);
    r.sup_second_extended = std::max(r.sup_second_extended, q2);
  }
  r.slope_first = log_slope(first);
  r.slope_second = log_slope(second);
  auto stable = [](double sup, double extended, const std::vector<std::pair<double, double>>& series) {
    if (!std::isfinite(extended)) return false;
    const double change = sup > 0.0 ? (extended - sup) / sup : (extended > 0.0 ? 1.0 : 0.0);
    return change < 0.05 && !divergent_series(series);
  };
  r.stable_first = stable(r.sup_first, r.sup_first_extended, first);
  r.stable_second = stable(r.sup_second, r.sup_second_extended, second);
  r.holds = r.stable_first && r.stable_second;
  return r;
}

// ---------------------------------------------------------------------------

RadialFunction smoothed_distance() {
  return make_radial_function([](const auto& t) { return sqrt(1.0 + t * t) - 1.0; });
}

ConformalConstruction conformal_quadratic_construction(const WarpedProfile& h,
                                                       const RadialFunction& phi,
                                                       const std::vector<double>& radii,
                                                       double c_max, bool enforce_conditions) {
  if (h.base.dimension != 1 || h.t_min != 0.0)
    throw ParameterError("conformal construction needs a capped surface profile");
  if (radii.empty()) throw SampleError("no radii for the conformal construction");
  const double r_max = *std::max_element(radii.begin(), radii.end());
  if (!(r_max < h.t_max)) throw DomainError("radii exceed the radial range of h");

  const ChartedMetric hm = warped_metric(h, "h");
  const ScalarField field = ScalarField::from_expression(
      [phi](const auto& x) { return lift(x[0], phi); });
  const auto phi_at = [phi](double t) { return phi(t)[0]; };
  // rho(t) = e^{-phi(t)} int_0^t e^{phi(s)} ds.
  const auto rho = [phi_at](double t) {
    const double top = phi_at(t);
    return segmented_integral([&](double s) { return std::exp(phi_at(s) - top); }, 0.0, t, 1e-13);
  };

  ChartedMetric g = conformal_metric(hm, field, "lemma31");
  {
    RadialStructure r;
    r.distance = [phi_at, rho](const Point& p) { return std::exp(phi_at(p[0])) * rho(p[0]); };
    const Box box = g.domain();
    r.point_at = [box, phi_at, rho](double s, std::mt19937_64& rng) {
      // Coordinate radius with d_g = s, by bisection on log d_g.
      auto f = [&](double t) { return t <= 0.0 ? -1e300 : phi_at(t) + std::log(rho(t)) - std::log(s); };
      double hi = 1.0;
      while (f(hi) < 0.0 && hi < box.upper[0] / 2.0) hi *= 2.0;
      const auto br = boost::math::tools::bisect(f, 0.0, hi, boost::math::tools::eps_tolerance<double>(50));
      return random_in_box(box, 0.5 * (br.first + br.second), rng);
    };
    g = g.with_radial(std::move(r));
  }

  ConformalConstruction out{g, {}, {}, false, {}, 0.0, false, 0.0};

  // Lemma conditions on a geometric grid reaching the largest radius.
  ConformalConditions& c = out.conditions;
  c.phi_excess = -std::numeric_limits<double>::infinity();
  const std::vector<double> grid = [&] {
    std::vector<double> v;
    const int count = 600;
    for (int k = 0; k < count; ++k) v.push_back(1e-3 * std::pow(r_max / 1e-3, k / (count - 1.0)));
    return v;
  }();
  for (double t : grid) {
    Point x(2);
    x << t, 0.0;
    const Matrix hx = hm.components(x);
    const ConformalData data = conformal_data(hm, field, x);
    c.phi_excess = std::max(c.phi_excess, data.phi - t);
    c.gap = std::max(c.gap, t - data.phi);
    c.gradient = std::max(c.gradient, std::sqrt(data.gradient.dot(hx.inverse() * data.gradient)));
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(data.hessian, hx, Eigen::EigenvaluesOnly);
    c.hessian = std::max(c.hessian, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  c.c_fitted = std::max({c.gap, c.gradient, c.hessian});
  if (enforce_conditions) {
    if (c.phi_excess > 1e-9)
      throw ConstructionError("phi exceeds d_h by " + std::to_string(c.phi_excess));
    if (c.gap > c_max) throw ConstructionError("d_h - phi reaches " + std::to_string(c.gap));
    if (c.gradient > c_max) throw ConstructionError("|grad phi| reaches " + std::to_string(c.gradient));
    if (c.hessian > c_max) throw ConstructionError("|Hess phi| reaches " + std::to_string(c.hessian));
  }

  out.distance_bound_ok = true;
  for (double t : radii) {
    Point x(2);
    x << t, 0.0;
    const Matrix hx = hm.components(x);
    const double p = phi_at(t);
    const double r = rho(t);

    ConformalBoundSample s;
    s.d_h = t;
    s.phi = p;
    s.log_distance = p + std::log(r);
    s.log_bound = c.c_fitted + p;
    s.log_path_bound = t + std::log1p(-std::exp(-t));
    if (s.log_distance > s.log_bound + 1e-12 || s.log_distance > s.log_path_bound + 1e-12)
      out.distance_bound_ok = false;
    out.bound_samples.push_back(s);

    const CurvatureTensor Rh = riemann(hm, x);
    const CurvatureTensor Rg = conformal_riemann(Rh, hx, conformal_data(hm, field, x));
    const CurvatureTensor weighted(x, hx, Rg.up_components());
    const double W = std::abs(sectional(weighted, hx, Vector::Unit(2, 0), Vector::Unit(2, 1)));
    out.weighted_decay.emplace_back(t, W * r * r);
    out.C_fitted = std::max(out.C_fitted, W * r * r);

    if (t <= 20.0) {
      const double K = sectional(g, orthonormal_plane(g, x, Vector::Unit(2, 0), Vector::Unit(2, 1)));
      const double d = std::exp(p) * r;
      const double generic = std::abs(K) * d * d;
      const double scale = std::max(std::abs(generic), 1e-300);
      out.generic_agreement = std::max(out.generic_agreement, std::abs(generic - W * r * r) / scale);
    }
  }
  out.divergent = divergent_series(out.weighted_decay);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<GalleryEntry> gallery_catalog() {
  return {
      {"flat", "n (default 2)", "Euclidean space in Cartesian coordinates"},
      {"flat-polar", "", "dt^2 + t^2 dtheta^2"},
      {"sphere", "", "unit round 2-sphere, pole at the basepoint"},
      {"hyperbolic", "t_max (default 300)", "dt^2 + sinh^2 t dtheta^2 (divergence control)"},
      {"hyperbolic-horocyclic", "", "dt^2 + e^{2t} dx^2"},
      {"cone", "eps", "dt^2 + (eps t)^2 dtheta^2"},
      {"example1", "c, base {circle|sphere|torus|hyperbolic}, base_dimension",
       "warped end dt^2 + t^{2c} h over a constant-curvature base"},
      {"example2", "c", "plane dt^2 + t^{2c} dtheta^2 capped at t = 1"},
      {"example3", "A0, L, jmax", "scaling model of a surface with quadratic growth"},
      {"collapse", "f in [1/2, 1)", "doubly-warped torus end with collapse exponent beta"},
      {"prop3-estimates", "jmax", "log-space volume and distance estimates of the R^3 construction"},
      {"lemma31", "profile {flat|example2}, c",
       "e^{2 phi} h over a capped surface h with phi = sqrt(1 + t^2) - 1"},
      {"acceptance", "criterion (1-9)", "runs one acceptance criterion as a scenario check"},
  };
}

}  // namespace qdecay
