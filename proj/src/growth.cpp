#include "qdecay/growth.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "qdecay/quadrature.hpp"
#include "qdecay/random.hpp"

namespace qdecay {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

struct LeftChart {};

constexpr double kTwoPi = 6.283185307179586;

// Geodesic equation x'' = -G(x', x') in first-order form.
struct GeodesicSystem {
  const ChartedMetric* metric;
  int n;

  void operator()(const State& y, State& dy, double /*s*/) const {
    Point x = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    if (!metric->domain().contains(x)) throw LeftChart{};
    Christoffel G(n);
    try {
      G = christoffel(*metric, x);
    } catch (const DomainError&) {
      throw LeftChart{};
    }
    for (int i = 0; i < n; ++i) {
      dy[i] = y[n + i];
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) acc += G(i, j, k) * y[n + j] * y[n + k];
      dy[n + i] = -acc;
      if (!std::isfinite(dy[n + i])) throw LeftChart{};
    }
  }
};

double wrapped_difference(const Box& box, int axis, double a, double b) {
  double d = a - b;
  if (box.periodic[axis]) d = std::remainder(d, box.width(axis));
  return d;
}

bool finite_box(const Box& box, double limit = 1e7) {
  for (int i = 0; i < box.dimension(); ++i) {
    if (box.periodic[i]) continue;
    if (!(box.width(i) < limit)) return false;
  }
  return true;
}

double quad_form(const double* g, const Vector& d, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += g[i * n + j] * d[i] * d[j];
  return s;
}

std::vector<std::vector<int>> primitive_stencil(int n) {
  // The widest angular gap, between (1, 0) and (r, 1), sets the anisotropy:
  // about 0.3% overestimate for r = 6 in the plane.
  const int radius = n == 2 ? 6 : (n == 3 ? 2 : 1);
  std::vector<std::vector<int>> out;
  std::vector<int> v(n, -radius);
  while (true) {
    int g = 0;
    for (int x : v) g = std::gcd(g, std::abs(x));
    if (g == 1) out.push_back(v);
    int axis = 0;
    while (axis < n && ++v[axis] > radius) v[axis++] = -radius;
    if (axis == n) break;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

GeodesicPath geodesic_trace(const ChartedMetric& metric, const Point& p, const Vector& v,
                            double length, double tolerance) {
  const int n = metric.dimension();
  const Matrix g0 = eval_metric(metric, p);
  if (v.size() != n) throw ShapeError("velocity must match the chart dimension");
  if (std::abs(inner(g0, v, v) - 1.0) > 1e-10)
    throw NormalizationError("geodesic start velocity is not g-unit");
  if (!(length >= 0.0)) throw ParameterError("geodesic length must be nonnegative");

  GeodesicPath path;
  State y(2 * n);
  for (int i = 0; i < n; ++i) {
    y[i] = p[i];
    y[n + i] = v[i];
  }
  auto record = [&](double s) {
    Point x = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    Vector xd = Eigen::Map<const Eigen::VectorXd>(y.data() + n, n);
    path.arc.push_back(s);
    path.max_speed_defect =
        std::max(path.max_speed_defect, std::abs(inner(metric.components(x), xd, xd) - 1.0));
    path.x.push_back(std::move(x));
    path.velocity.push_back(std::move(xd));
  };
  record(0.0);

  GeodesicSystem system{&metric, n};
  auto stepper = odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
  double s = 0.0;
  double ds = std::min(0.01, std::max(length, 1e-12) / 16.0);
  for (long iter = 0; s < length && iter < 10'000'000; ++iter) {
    if (s + ds > length) ds = length - s;
    odeint::controlled_step_result result;
    try {
      result = stepper.try_step(system, y, s, ds);
    } catch (const LeftChart&) {
      ds *= 0.5;
      if (ds < 1e-12 * std::max(1.0, length)) {
        path.exited = true;
        break;
      }
      continue;
    }
    if (result == odeint::success) {
      Point x = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
      if (!metric.domain().contains(x)) {
        path.exited = true;
        break;
      }
      record(s);
    }
  }
  return path;
}

// ---------------------------------------------------------------------------

std::string to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::radial: return "radial";
    case DistanceMethod::graph: return "graph";
    case DistanceMethod::shoot: return "shoot";
  }
  return "unknown";
}

DistanceMethod parse_distance_method(const std::string& name) {
  if (name == "radial") return DistanceMethod::radial;
  if (name == "graph") return DistanceMethod::graph;
  if (name == "shoot") return DistanceMethod::shoot;
  throw ConfigError("unknown distance method '" + name + "'");
}

DistanceField::DistanceField(const ChartedMetric& metric, GraphOptions options)
    : n_(metric.dimension()), region_(options.region.value_or(metric.domain())), metric_(&metric) {
  if (!(options.spacing > 0.0)) throw ParameterError("graph spacing must be positive");
  if (region_.dimension() != n_) throw ShapeError("graph region dimension mismatch");
  if (!finite_box(region_)) throw MethodError("graph distance needs a bounded region");
  if (!region_.contains(metric.basepoint()))
    throw DomainError("basepoint outside the graph region");

  std::size_t total = 1;
  for (int i = 0; i < n_; ++i) {
    const double w = region_.width(i);
    long count;
    if (region_.periodic[i]) {
      count = std::max<long>(4, std::lround(w / options.spacing));
      step_.push_back(w / count);
    } else {
      count = std::max<long>(2, std::lround(w / options.spacing) + 1);
      step_.push_back(w / (count - 1));
    }
    counts_.push_back(count);
    total *= static_cast<std::size_t>(count);
    if (total > options.max_nodes) throw BudgetError("graph grid exceeds the node budget");
  }

  std::vector<double> gflat(total * n_ * n_);
  std::vector<long> idx(n_, 0);
  for (std::size_t node = 0; node < total; ++node) {
    std::size_t rest = node;
    for (int i = 0; i < n_; ++i) {
      idx[i] = static_cast<long>(rest % counts_[i]);
      rest /= counts_[i];
    }
    const Matrix g = metric.components(node_point(idx));
    for (int a = 0; a < n_ * n_; ++a) gflat[node * n_ * n_ + a] = g.data()[a];
  }

  dist_.assign(total, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

  auto length = [&](const double* ga, const double* gb, const Vector& d) {
    const double qa = quad_form(ga, d, n_), qb = quad_form(gb, d, n_);
    if (!std::isfinite(qa) || !std::isfinite(qb)) return std::numeric_limits<double>::infinity();
    return 0.5 * (std::sqrt(std::max(0.0, qa)) + std::sqrt(std::max(0.0, qb)));
  };

  // Seed the corners of the basepoint's cell.
  const Point& base = metric.basepoint();
  const Matrix gb = metric.components(base);
  std::vector<long> cell(n_);
  for (int i = 0; i < n_; ++i) {
    const double f = (base[i] - region_.lower[i]) / step_[i];
    cell[i] = static_cast<long>(std::floor(f));
    if (!region_.periodic[i]) cell[i] = std::clamp<long>(cell[i], 0, counts_[i] - 2);
  }
  for (int corner = 0; corner < (1 << n_); ++corner) {
    std::vector<long> c(n_);
    Vector d(n_);
    for (int i = 0; i < n_; ++i) {
      c[i] = cell[i] + ((corner >> i) & 1);
      d[i] = wrapped_difference(region_, i, region_.lower[i] + c[i] * step_[i], base[i]);
    }
    const std::size_t node = node_index(c);
    const double len = length(gb.data(), &gflat[node * n_ * n_], d);
    if (len < dist_[node]) {
      dist_[node] = len;
      queue.emplace(len, node);
    }
  }

  const auto stencil = primitive_stencil(n_);
  std::vector<long> nb(n_);
  Vector d(n_);
  while (!queue.empty()) {
    const auto [du, u] = queue.top();
    queue.pop();
    if (du > dist_[u]) continue;
    std::size_t rest = u;
    for (int i = 0; i < n_; ++i) {
      idx[i] = static_cast<long>(rest % counts_[i]);
      rest /= counts_[i];
    }
    for (const auto& s : stencil) {
      bool inside = true;
      for (int i = 0; i < n_; ++i) {
        nb[i] = idx[i] + s[i];
        if (region_.periodic[i]) {
          nb[i] = ((nb[i] % counts_[i]) + counts_[i]) % counts_[i];
        } else if (nb[i] < 0 || nb[i] >= counts_[i]) {
          inside = false;
          break;
        }
        d[i] = s[i] * step_[i];
      }
      if (!inside) continue;
      const std::size_t v = node_index(nb);
      const double alt = du + length(&gflat[u * n_ * n_], &gflat[v * n_ * n_], d);
      if (alt < dist_[v]) {
        dist_[v] = alt;
        queue.emplace(alt, v);
      }
    }
  }
}

std::size_t DistanceField::node_index(const std::vector<long>& idx) const {
  std::size_t node = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    long k = idx[i];
    if (region_.periodic[i]) k = ((k % counts_[i]) + counts_[i]) % counts_[i];
    node = node * counts_[i] + static_cast<std::size_t>(k);
  }
  return node;
}

Point DistanceField::node_point(const std::vector<long>& idx) const {
  Point p(n_);
  for (int i = 0; i < n_; ++i) p[i] = region_.lower[i] + idx[i] * step_[i];
  return p;
}

double DistanceField::segment_length(const Matrix& ga, const Matrix& gb, const Vector& delta) const {
  const double qa = inner(ga, delta, delta), qb = inner(gb, delta, delta);
  return 0.5 * (std::sqrt(std::max(0.0, qa)) + std::sqrt(std::max(0.0, qb)));
}

double DistanceField::operator()(const Point& p) const {
  if (p.size() != n_ || !region_.contains(p)) throw DomainError("query point outside the graph region");
  const Matrix gp = metric_->components(p);
  std::vector<long> cell(n_);
  for (int i = 0; i < n_; ++i) {
    const double f = (p[i] - region_.lower[i]) / step_[i];
    cell[i] = static_cast<long>(std::floor(f));
    if (!region_.periodic[i]) cell[i] = std::clamp<long>(cell[i], 0, counts_[i] - 2);
  }
  // Nodes in a block around the cell, so the last leg is not forced through a corner.
  const int reach = n_ <= 2 ? 3 : 1;
  const int side = 2 * reach;
  long combos = 1;
  for (int i = 0; i < n_; ++i) combos *= side;
  double best = std::numeric_limits<double>::infinity();
  std::vector<long> c(n_);
  Vector d(n_);
  for (long code = 0; code < combos; ++code) {
    long rest = code;
    bool inside = true;
    for (int i = 0; i < n_; ++i) {
      c[i] = cell[i] - reach + 1 + rest % side;
      rest /= side;
      if (region_.periodic[i]) c[i] = ((c[i] % counts_[i]) + counts_[i]) % counts_[i];
      else if (c[i] < 0 || c[i] >= counts_[i]) inside = false;
      d[i] = wrapped_difference(region_, i, p[i], region_.lower[i] + c[i] * step_[i]);
    }
    if (!inside) continue;
    const std::size_t node = node_index(c);
    if (!std::isfinite(dist_[node])) continue;
    const Matrix gn = metric_->components(node_point(c));
    best = std::min(best, dist_[node] + segment_length(gp, gn, d));
  }
  if (!std::isfinite(best)) throw BudgetError("point not reached by the graph");
  return best;
}

double shoot_distance(const ChartedMetric& metric, const Point& m, const ShootOptions& options) {
  const int n = metric.dimension();
  const Point& p = metric.basepoint();
  const Box& box = metric.domain();
  const Matrix gp = eval_metric(metric, p);
  GeodesicSystem system{&metric, n};

  auto residual = [&](const Vector& v0) {
    State y(2 * n);
    for (int i = 0; i < n; ++i) {
      y[i] = p[i];
      y[n + i] = v0[i];
    }
    odeint::integrate_adaptive(
        odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_dopri5<State>()), system, y,
        0.0, 1.0, 0.01);
    Vector r(n);
    for (int i = 0; i < n; ++i) r[i] = wrapped_difference(box, i, y[i], m[i]);
    return r;
  };

  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = wrapped_difference(box, i, m[i], p[i]);
  if (v.norm() == 0.0) return 0.0;
  Vector r;
  try {
    r = residual(v);
  } catch (const LeftChart&) {
    throw BudgetError("initial shooting guess leaves the chart");
  }
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (r.norm() < options.tolerance * std::max(1.0, m.norm())) return std::sqrt(inner(gp, v, v));
    Matrix J(n, n);
    for (int k = 0; k < n; ++k) {
      Vector vk = v;
      const double h = 1e-7 * std::max(1.0, std::abs(v[k]));
      vk[k] += h;
      try {
        J.col(k) = (residual(vk) - r) / h;
      } catch (const LeftChart&) {
        throw BudgetError("shooting Jacobian leaves the chart");
      }
    }
    const Vector step = J.partialPivLu().solve(-r);
    double damping = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 20 && !accepted; ++halving, damping *= 0.5) {
      try {
        const Vector trial = v + damping * step;
        const Vector rt = residual(trial);
        if (rt.norm() < r.norm() || halving == 19) {
          v = trial;
          r = rt;
          accepted = true;
        }
      } catch (const LeftChart&) {
      }
    }
    if (!accepted) break;
  }
  if (r.norm() < options.tolerance * std::max(1.0, m.norm())) return std::sqrt(inner(gp, v, v));
  throw BudgetError("geodesic shooting did not converge");
}

double distance_estimate(const ChartedMetric& metric, const Point& m, const DistanceOptions& options) {
  if (m.size() != metric.dimension() || !metric.domain().contains(m))
    throw DomainError("distance target outside the chart of " + metric.name());
  if (options.methods.empty()) throw ParameterError("no distance method requested");
  double best = std::numeric_limits<double>::infinity();
  for (DistanceMethod method : options.methods) {
    switch (method) {
      case DistanceMethod::radial:
        if (!metric.radial() || !metric.radial()->distance)
          throw MethodError("metric " + metric.name() + " has no radial distance");
        best = std::min(best, metric.radial()->distance(m));
        break;
      case DistanceMethod::graph:
        best = std::min(best, DistanceField(metric, options.graph)(m));
        break;
      case DistanceMethod::shoot:
        best = std::min(best, shoot_distance(metric, m, options.shoot));
        break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::optional<Box> ball_region(const ChartedMetric& metric, double t) {
  if (metric.radial() && metric.radial()->ball_box) return metric.radial()->ball_box(t);
  if (!metric.radial() || !metric.radial()->profile) return std::nullopt;
  // Warped charts: the radial coordinate moves at unit speed, so B_t lies in
  // the slab |t' - t_0| <= t.
  Box box = metric.domain();
  const double t0 = metric.basepoint()[0];
  box.lower[0] = std::max(box.lower[0], t0 - t);
  box.upper[0] = std::min(box.upper[0], t0 + t);
  if (!finite_box(box)) return std::nullopt;
  return box;
}

namespace {

struct MonteCarloSamples {
  std::vector<double> weight;
  std::vector<double> distance;
  double region_volume = 0.0;
};

MonteCarloSamples draw_samples(const ChartedMetric& metric, double t_max, const VolumeOptions& options) {
  std::optional<Box> region = options.region;
  if (!region) region = ball_region(metric, t_max);
  if (!region && finite_box(metric.domain())) region = metric.domain();
  if (!region || !finite_box(*region))
    throw MethodError("Monte Carlo volume needs a bounded sampling region for " + metric.name());
  if (options.mc_budget == 0 || options.tasks < 1) throw ParameterError("empty Monte Carlo budget");

  const int n = metric.dimension();
  std::optional<DistanceField> field;
  const bool radial = metric.radial() && metric.radial()->distance &&
                      std::find(options.distance.methods.begin(), options.distance.methods.end(),
                                DistanceMethod::radial) != options.distance.methods.end();
  if (!radial) {
    GraphOptions graph = options.distance.graph;
    if (!graph.region) graph.region = region;
    field.emplace(metric, graph);
  }

  MonteCarloSamples out;
  out.region_volume = region->volume();
  const std::size_t per_task = (options.mc_budget + options.tasks - 1) / options.tasks;
  for (int task = 0; task < options.tasks; ++task) {
    std::mt19937_64 rng = make_stream(options.seed, static_cast<std::uint64_t>(task));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t count = std::min(per_task, options.mc_budget - task * per_task);
    for (std::size_t k = 0; k < count; ++k) {
      Point x(n);
      for (int i = 0; i < n; ++i) x[i] = region->lower[i] + region->width(i) * unit(rng);
      const Matrix g = metric.components(x);
      const double det = g.determinant();
      const double w = det > 0.0 && std::isfinite(det) ? std::sqrt(det) : 0.0;
      double d = std::numeric_limits<double>::infinity();
      if (w > 0.0) d = radial ? metric.radial()->distance(x) : (*field)(x);
      out.weight.push_back(w);
      out.distance.push_back(d);
    }
  }
  return out;
}

VolumeEstimate tally(const MonteCarloSamples& s, double t) {
  const double N = static_cast<double>(s.weight.size());
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < s.weight.size(); ++k) {
    if (s.distance[k] <= t) {
      sum += s.weight[k];
      sum2 += s.weight[k] * s.weight[k];
    }
  }
  const double mean = sum / N;
  const double var = std::max(0.0, sum2 / N - mean * mean);
  return {s.region_volume * mean, s.region_volume * std::sqrt(var / N)};
}

std::function<double(double)> sphere_area_of(const ChartedMetric& metric) {
  if (!metric.radial() || !metric.radial()->sphere_area)
    throw MethodError("quadrature volume needs a rotationally symmetric metric; " + metric.name() +
                      " has no sphere-area map");
  return metric.radial()->sphere_area;
}

}  // namespace

VolumeEstimate ball_volume(const ChartedMetric& metric, double t, const VolumeOptions& options) {
  if (!(t > 0.0)) throw ParameterError("ball radius must be positive");
  if (options.method == VolumeMethod::quadrature) {
    const auto area = sphere_area_of(metric);
    return {segmented_integral(area, 0.0, t), 0.0};
  }
  if (options.method == VolumeMethod::monte_carlo) return tally(draw_samples(metric, t, options), t);
  throw MethodError("model volumes are not computed from a metric");
}

GrowthCurve growth_curve(const ChartedMetric& metric, const std::vector<double>& radii,
                         const VolumeOptions& options) {
  if (radii.empty()) throw GridError("no radii for the growth curve");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw GridError("growth radii must be positive");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw GridError("growth radii must increase");
  }
  GrowthCurve curve;
  curve.n = metric.dimension();
  curve.t = radii;
  curve.method = options.method;
  if (options.method == VolumeMethod::quadrature) {
    const auto area = sphere_area_of(metric);
    double acc = 0.0, prev = 0.0;
    for (double t : radii) {
      acc += segmented_integral(area, prev, t);
      prev = t;
      curve.volume.push_back(acc);
      curve.stderr_.push_back(0.0);
    }
  } else if (options.method == VolumeMethod::monte_carlo) {
    const MonteCarloSamples samples = draw_samples(metric, radii.back(), options);
    for (double t : radii) {
      const VolumeEstimate e = tally(samples, t);
      curve.volume.push_back(e.value);
      curve.stderr_.push_back(e.stderr_);
    }
  } else {
    throw MethodError("model volumes are not computed from a metric");
  }
  return curve;
}

// ---------------------------------------------------------------------------

double log_slope(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [t, y] : series) {
    const double x = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(series.size());
  const double den = m * sxx - sx * sx;
  return den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
}

bool divergent_series(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 2) return false;
  double mean = 0.0;
  for (const auto& s : series) mean += s.second;
  mean /= static_cast<double>(series.size());
  return log_slope(series) > 0.1 * std::max(1.0, mean);
}

DecayReport decay_constant(const ChartedMetric& metric, const DecayOptions& options) {
  const int n = metric.dimension();
  if (options.points_per_radius < 1 || options.planes_per_point < 0)
    throw ParameterError("invalid decay sampling counts");
  const bool radial = metric.radial() && metric.radial()->point_at && metric.radial()->distance;

  DecayReport report;
  for (std::size_t r = 0; r < options.radii.size(); ++r) {
    const double t = options.radii[r];
    if (!(t >= options.r_min)) continue;
    std::mt19937_64 rng = make_stream(options.seed, r);
    std::normal_distribution<double> normal;
    double worst = 0.0, worst_lower = 0.0;
    for (int k = 0; k < options.points_per_radius; ++k) {
      Point x;
      double d;
      if (radial) {
        x = metric.radial()->point_at(t, rng);
        d = metric.radial()->distance(x);
      } else {
        bool found = false;
        for (int attempt = 0; attempt < 100 && !found; ++attempt) {
          Vector u(n);
          for (int i = 0; i < n; ++i) u[i] = normal(rng);
          x = metric.basepoint() + t * u / u.norm();
          found = metric.domain().contains(x);
        }
        if (!found) throw SampleError("no sample point at radius " + std::to_string(t));
        d = distance_estimate(metric, x, options.distance);
      }
      const Matrix g = eval_metric(metric, x);
      const CurvatureTensor R = riemann(metric, x);
      std::vector<std::pair<Vector, Vector>> planes;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          planes.emplace_back(Vector::Unit(n, i), Vector::Unit(n, j));
      // Random planes are drawn in a g-orthonormal frame; coordinate
      // directions can be badly scaled (g_11 ~ t^4 on example2).
      const Matrix frame = Eigen::LLT<Matrix>(g).matrixU().solve(Matrix::Identity(n, n));
      for (int q = 0; q < options.planes_per_point; ++q) {
        Vector v(n), w(n);
        for (int i = 0; i < n; ++i) v[i] = normal(rng);
        for (int i = 0; i < n; ++i) w[i] = normal(rng);
        planes.emplace_back(frame * v, frame * w);
      }
      for (const auto& [v, w] : planes) {
        const TwoPlane P = orthonormal_plane(metric, x, v, w);
        const double K = sectional(R, g, P.v, P.w);
        report.samples.push_back({x, P.v, P.w, K, d});
        worst = std::max(worst, std::abs(K) * d * d);
        worst_lower = std::max(worst_lower, -K * d * d);
      }
    }
    report.per_radius.emplace_back(t, worst);
    report.per_radius_lower.emplace_back(t, worst_lower);
    report.C_fitted = std::max(report.C_fitted, worst);
    report.C_lower = std::max(report.C_lower, worst_lower);
  }
  if (report.samples.empty()) throw SampleError("empty decay sample");
  report.slope = log_slope(report.per_radius);
  report.lower_slope = log_slope(report.per_radius_lower);
  report.divergent = divergent_series(report.per_radius);
  report.lower_divergent = divergent_series(report.per_radius_lower);
  return report;
}

LowerDecayReport lower_decay_check(const ChartedMetric& metric, const DecayOptions& options) {
  const DecayReport full = decay_constant(metric, options);
  return {full.C_lower, full.lower_divergent, full.lower_slope, full.per_radius_lower};
}

// ---------------------------------------------------------------------------

SlowGrowthReport slow_growth_check(const GrowthCurve& curve, double fraction) {
  curve.validate();
  if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("slow-growth fraction must be in (0, 1)");
  if (curve.t.back() < 100.0 * curve.t.front())
    throw RangeError("slow-growth check needs at least two decades of radii");
  SlowGrowthReport report;
  for (std::size_t k = 0; k < curve.size(); ++k)
    report.ratio.emplace_back(curve.t[k], curve.volume[k] / std::pow(curve.t[k], curve.n));

  std::size_t ref = 0;
  while (ref < curve.size() && curve.t[ref] < 10.0 * curve.t.front()) ++ref;
  report.reference_t = report.ratio[ref].first;
  report.reference_ratio = report.ratio[ref].second;

  const double top = curve.t.back() / 10.0;
  report.liminf_estimate = std::numeric_limits<double>::infinity();
  for (const auto& [t, r] : report.ratio)
    if (t >= top) report.liminf_estimate = std::min(report.liminf_estimate, r);

  report.witness.push_back(report.ratio[ref]);
  for (std::size_t k = ref + 1; k < report.ratio.size(); ++k)
    if (report.ratio[k].second < report.witness.back().second) report.witness.push_back(report.ratio[k]);

  report.slow = report.liminf_estimate < fraction * report.reference_ratio && report.witness.size() >= 2;
  return report;
}

double growth_tail_integral(const GrowthCurve& curve) {
  curve.validate();
  double sum = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (curve.t[k - 1] < 1.0) continue;
    const double a = curve.volume[k - 1] / std::pow(curve.t[k - 1], curve.n);
    const double b = curve.volume[k] / std::pow(curve.t[k], curve.n);
    sum += 0.5 * (a + b) * (std::log(curve.t[k]) - std::log(curve.t[k - 1]));
  }
  return sum;
}

double loglog_slope(const GrowthCurve& curve, double t_from) {
  std::vector<std::pair<double, double>> series;
  for (std::size_t k = 0; k < curve.size(); ++k)
    if (curve.t[k] >= t_from && curve.volume[k] > 0.0)
      series.emplace_back(curve.t[k], std::log(curve.volume[k]));
  if (series.size() < 2) throw GridError("need two positive samples for a log-log slope");
  return log_slope(series);
}

// ---------------------------------------------------------------------------

GaussBonnetReport gauss_bonnet_disk(const ChartedMetric& metric, double T) {
  if (metric.dimension() != 2) throw ShapeError("Gauss-Bonnet disk check is for surfaces");
  if (!metric.radial() || !metric.radial()->profile)
    throw MethodError("Gauss-Bonnet disk check needs a warped surface dt^2 + f^2 dtheta^2");
  const WarpedProfile& profile = *metric.radial()->profile;
  if (profile.t_min != 0.0) throw CapError("chart of " + metric.name() + " has no cap at t = 0");
  const auto at0 = profile.warp(0.0);
  if (std::abs(at0[0]) > 1e-12 || std::abs(at0[1] - 1.0) > 1e-8)
    throw CapError("f'(0+) = " + std::to_string(at0[1]) + " is not 1; the cap is singular");
  if (!(T > 0.0)) throw ParameterError("Gauss-Bonnet radius must be positive");

  GaussBonnetReport report;
  report.T = T;
  report.boundary_total = 1.0 - profile.df(T);

  const double period = metric.domain().width(1);
  constexpr int kAngles = 8;
  auto ring = [&](double t) {
    double s = 0.0;
    for (int a = 0; a < kAngles; ++a) {
      Point x(2);
      x << t, metric.domain().lower[1] + period * (a + 0.5) / kAngles;
      const Matrix g = metric.components(x);
      const CurvatureTensor R = riemann_from(metric.derivatives(x), x);
      const double K = sectional(R, g, Vector::Unit(2, 0), Vector::Unit(2, 1));
      s += K * std::sqrt(g.determinant());
    }
    return s * period / kAngles / kTwoPi;
  };
  // Rounding in K near the cap point is of order 1e-16 / t, so the
  // tolerance stays well above it.
  std::vector<double> cuts{0.0};
  for (double c : {0.25, 1.0})
    if (c < T) cuts.push_back(c);
  cuts.push_back(T);
  for (std::size_t k = 1; k < cuts.size(); ++k)
    report.area_total += segmented_integral(ring, cuts[k - 1], cuts[k], 1e-10, 12, 1e-13);
  report.agreement = std::abs(report.boundary_total - report.area_total);
  return report;
}

}  // namespace qdecay
