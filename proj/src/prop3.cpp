#include "qdecay/prop3.hpp"
#include "qdecay/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace qdecay {

namespace {

// exp(-u) underflows far down the profile, so pieces can integrate to 0.
double gk(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return adaptive_gk(f, a, b, 1e-13, 1e-16, 20);
}

}  // namespace

double u_profile(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("u profile is defined on [0, 1]");
  return u_profile_expr(s);
}

WarpedProfile e_block_profile(int k) {
  if (k < 1) throw ParameterError("block length k must be >= 1");
  WarpedProfile p;
  const double kd = k;
  p.warp = make_radial_function([kd](const auto& r) { return exp(-kd * u_profile_expr(r / kd)); });
  p.base = BaseSpace::circle();
  p.t_min = 0.0;
  p.t_max = kd;
  return p;
}

// ---------------------------------------------------------------------------

std::string to_string(PieceEnd end) {
  switch (end) {
    case PieceEnd::E1: return "E1";
    case PieceEnd::E2: return "E2";
    case PieceEnd::E3: return "E3";
    case PieceEnd::E: return "E";
  }
  return "?";
}

int MorsePotential::block_length(PieceEnd end) const {
  if (kind == PieceKind::even) {
    switch (end) {
      case PieceEnd::E1: return 2 * j + 2;
      case PieceEnd::E2: return 2 * j + 1;
      case PieceEnd::E3: return 2 * j - 2;
      case PieceEnd::E: break;
    }
  } else if (end == PieceEnd::E) {
    return 2 * j;
  }
  throw ParameterError("piece " + std::to_string(piece) + " has no end " + to_string(end));
}

MorsePotential prop3_piece(int piece) {
  if (piece < 1) throw ParameterError("piece index must be >= 1");
  MorsePotential m;
  m.piece = piece;
  m.j = piece / 2;
  const double j = m.j;
  if (piece % 2 == 0) {
    m.kind = PieceKind::even;
    m.offset = 80.0 * j * j + 80.0 * j;
    m.end_slopes = {{PieceEnd::E1, 40.0}, {PieceEnd::E2, 10.0}, {PieceEnd::E3, -40.0}};
    m.critical_window = {m.offset - 80.0, m.offset};
    m.critical_value = m.offset - 40.0;
  } else {
    m.kind = PieceKind::odd;
    m.offset = 80.0 * j * j + 120.0 * j + 10.0;
    m.end_slopes = {{PieceEnd::E, -10.0}};
    m.critical_window = {m.offset, m.offset + 10.0};
    m.critical_value = m.offset + 10.0;
  }
  return m;
}

double prop3_potential(int piece, PieceEnd end, double distance) {
  if (!(distance >= 0.0)) throw ParameterError("distance to the core must be nonnegative");
  const MorsePotential m = prop3_piece(piece);
  m.block_length(end);  // validates the end
  switch (end) {
    case PieceEnd::E1: return m.offset + 40.0 * distance;
    case PieceEnd::E2: return m.offset + 10.0 * distance;
    case PieceEnd::E3: return m.offset - 80.0 - 40.0 * distance;
    case PieceEnd::E: return m.offset - 10.0 * distance;
  }
  return 0.0;
}

double circle_length(int i) { return std::exp(-static_cast<double>(i)); }

std::vector<GluingRow> prop3_gluing_table(int j_max) {
  if (j_max < 1) throw ParameterError("j_max must be >= 1");
  std::vector<GluingRow> rows;
  auto add = [&](int j, std::string relation, double lhs, double rhs) {
    rows.push_back({j, std::move(relation), lhs, rhs, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs))});
  };
  auto block_end = [](int k) { return e_block_profile(k).f(k); };
  for (int j = 1; j <= j_max; ++j) {
    const int even = 2 * j;
    add(j, "phi(Sigma_2j, E1, 2j+2) = phi(Sigma_2j+2, E3, 2j)",
        prop3_potential(even, PieceEnd::E1, 2 * j + 2), prop3_potential(even + 2, PieceEnd::E3, 2 * j));
    add(j, "phi(Sigma_2j, E2, 2j+1) = phi(Sigma_2j+1, E, 2j)",
        prop3_potential(even, PieceEnd::E2, 2 * j + 1), prop3_potential(even + 1, PieceEnd::E, 2 * j));
    add(j, "delta_2j,1 = eps_2j+2", block_end(2 * j + 2), circle_length(2 * j + 2));
    add(j, "delta_2j,2 = eps_2j+1", block_end(2 * j + 1), circle_length(2 * j + 1));
    if (2 * j - 2 >= 1) add(j, "delta_2j,3 = eps_2j-2", block_end(2 * j - 2), circle_length(2 * j - 2));
    add(j, "delta_2j+1,1 = eps_2j", block_end(2 * j), circle_length(2 * j));
  }
  return rows;
}

// ---------------------------------------------------------------------------

FlowProfile prop3_flow_profile(int j) {
  if (j < 1) throw ParameterError("flow profile needs j >= 1");
  const double top = prop3_potential(2 * j, PieceEnd::E1, 2 * j + 2);
  const double bottom = prop3_potential(2, PieceEnd::E3, 0.0);
  FlowProfile p;
  p.length = top - bottom;
  for (int k = 1; k <= j; ++k) {
    const MorsePotential m = prop3_piece(2 * k);
    p.critical.push_back(top - m.critical_value);
    p.breaks.push_back(top - m.critical_window[0]);
    p.breaks.push_back(top - m.critical_window[1]);
  }
  std::sort(p.critical.begin(), p.critical.end());
  // Measured from the critical points in u itself: top - u can round onto a
  // saddle value when u is one ulp away from it.
  p.gradient_offset = [](double d) {
    return std::abs(d) <= 40.0 ? std::min(40.0, std::sqrt(2.0 * std::abs(d))) : 40.0;
  };
  p.gradient = [critical = p.critical, near = p.gradient_offset](double u) {
    for (double c : critical)
      if (std::abs(u - c) <= 40.0) return near(u - c);
    return 40.0;
  };
  std::sort(p.breaks.begin(), p.breaks.end());
  return p;
}

namespace {

// int_a^b w(u) / G(u) du with the substitution u = u_c +- s^2 next to each
// critical point u_c.
double flow_integral(const FlowProfile& p, const std::function<double(double)>& weight, double a,
                     double b) {
  std::vector<double> cuts{a, b};
  for (double c : p.critical)
    if (c > a && c < b) cuts.push_back(c);
  for (double c : p.breaks)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto is_critical = [&](double x) {
    return std::any_of(p.critical.begin(), p.critical.end(), [x](double c) { return c == x; });
  };
  auto integrand = [&](double u) {
    const double G = p.gradient(u);
    if (!(G > 0.0)) throw ProfileError("|grad phi| vanishes away from the critical values");
    return weight(u) / G;
  };
  // int over u = c + dir s^2, i.e. 2 s w(u) / G(u) ds.
  auto substituted = [&](double c, double dir, double s) {
    if (s == 0.0) return 0.0;
    const double d = dir * s * s;
    double G;
    if (p.gradient_offset) {
      G = p.gradient_offset(d);
    } else {
      // c + d can round back onto c; step one ulp off it instead.
      const double u = c + d == c ? std::nextafter(c, c + dir) : c + d;
      G = p.gradient(u);
    }
    if (!(G > 0.0)) throw ProfileError("|grad phi| vanishes away from the critical values");
    return 2.0 * s * weight(c + d) / G;
  };

  double sum = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = cuts[k - 1], hi = cuts[k];
    const bool left = is_critical(lo), right = is_critical(hi);
    if (!left && !right) {
      sum += gk(integrand, lo, hi);
      continue;
    }
    // Split at the midpoint so each half touches at most one critical point.
    const double mid = 0.5 * (lo + hi);
    if (left) {
      sum += gk([&](double s) { return substituted(lo, 1.0, s); }, 0.0, std::sqrt(mid - lo));
    } else {
      sum += gk(integrand, lo, mid);
    }
    if (right) {
      sum += gk([&](double s) { return substituted(hi, -1.0, s); }, 0.0, std::sqrt(hi - mid));
    } else {
      sum += gk(integrand, mid, hi);
    }
  }
  return sum;
}

void check_integrable(const FlowProfile& p) {
  for (double c : p.critical) {
    for (int side : {-1, 1}) {
      const double d1 = 1e-4, d2 = 1e-8;
      const double u1 = c + side * d1, u2 = c + side * d2;
      if (u2 < 0.0 || u1 > p.length || u1 < 0.0 || u2 > p.length) continue;
      const double g1 = p.gradient(u1), g2 = p.gradient(u2);
      if (!(g2 > 0.0)) throw ProfileError("|grad phi| vanishes on a neighbourhood of a critical value");
      // Local exponent p in G ~ |u - u_c|^p; 1/G is integrable iff p < 1.
      const double exponent = std::log(g1 / g2) / std::log(d1 / d2);
      if (exponent > 0.95)
        throw ProfileError("|grad phi| vanishes non-integrably (order " + std::to_string(exponent) + ")");
    }
  }
}

}  // namespace

FlowBound prop3_gradient_flow_bound(const FlowProfile& profile, double D_window) {
  if (!(profile.length > 0.0)) throw ParameterError("flow profile length must be positive");
  if (!(D_window > 0.0)) throw ParameterError("window bound D must be positive");
  check_integrable(profile);

  FlowBound out;
  const auto decay = [](double u) { return std::exp(-u); };
  const auto one = [](double) { return 1.0; };
  out.total = flow_integral(profile, decay, 0.0, profile.length);

  // Reference: tanh-sinh on the raw integrand between critical points.
  {
    boost::math::quadrature::tanh_sinh<double> ts;
    std::vector<double> cuts{0.0, profile.length};
    for (double c : profile.critical)
      if (c > 0.0 && c < profile.length) cuts.push_back(c);
    for (double c : profile.breaks)
      if (c > 0.0 && c < profile.length) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      const double lo = cuts[k - 1], hi = cuts[k];
      // Integrate in the offset from lo so that points near lo keep their
      // relative precision.
      out.reference += ts.integrate(
          [&](double x, double xc) {
            const double u = x < 0.5 * (hi - lo) ? lo + x : hi - xc;
            const double G = profile.gradient(u);
            return G > 0.0 ? std::exp(-u) / G : 0.0;
          },
          0.0, hi - lo);
    }
  }

  if (profile.length >= 1.0) {
    std::vector<double> starts;
    for (double x = 0.0; x <= profile.length - 1.0; x += 0.25) starts.push_back(x);
    for (double c : profile.critical)
      starts.push_back(std::clamp(c - 0.5, 0.0, profile.length - 1.0));
    std::sort(starts.begin(), starts.end());
    for (double x : starts) {
      const double w = flow_integral(profile, one, x, x + 1.0);
      out.windows.emplace_back(x, w);
      out.D_fitted = std::max(out.D_fitted, w);
    }
  } else {
    out.D_fitted = flow_integral(profile, one, 0.0, profile.length);
    out.windows.emplace_back(0.0, out.D_fitted);
  }
  out.bound = D_window / (1.0 - std::exp(-1.0));
  out.windows_ok = out.D_fitted <= D_window;
  out.total_ok = out.total <= out.bound;
  return out;
}

// ---------------------------------------------------------------------------

Prop3Estimate prop3_log_estimates(int j) {
  if (j < 1) throw ParameterError("estimates need j >= 1");
  const double jd = j;
  Prop3Estimate e;
  e.j = j;
  // vol(F_j) = (1 - e^{-120 j}) / 120 * e^{240j^2 + 480j + 240} e^{-2(2j+2)}.
  const double log_vol = std::log(-std::expm1(-120.0 * jd)) - std::log(120.0) +
                         (240.0 * jd * jd + 480.0 * jd + 240.0) - 2.0 * (2.0 * jd + 2.0);
  // t_{j+1} >= (1 - e^{-40 j}) / 40 * e^{80j^2 + 160j + 80}.
  const double log_t = std::log(-std::expm1(-40.0 * jd)) - std::log(40.0) +
                       (80.0 * jd * jd + 160.0 * jd + 80.0);
  e.volume = LogQuantity::from_log(log_vol);
  e.t_lower = LogQuantity::from_log(log_t);
  e.log_ratio = (e.volume / e.t_lower.pow(3.0)).log();

  // Independent route: factor out the integrand's maximum at x = 2j + 2 and
  // integrate the remaining bounded exponential.
  const double a = jd + 2.0, b = 2.0 * jd + 2.0;
  const double I120 = gk([&](double x) { return std::exp(120.0 * (x - b)); }, a, b);
  const double I40 = gk([&](double x) { return std::exp(40.0 * (x - b)); }, a, b);
  e.log_volume_quadrature = 3.0 * (80.0 * jd * jd + 80.0 * jd) + 120.0 * b + std::log(I120) -
                            2.0 * (2.0 * jd + 2.0);
  e.log_t_quadrature = 80.0 * jd * jd + 80.0 * jd + 40.0 * b + std::log(I40);
  return e;
}

double prop3_ratio_slope(const std::vector<Prop3Estimate>& rows) {
  if (rows.size() < 2) throw GridError("need two rows for a slope");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    sx += r.j;
    sy += r.log_ratio;
    sxx += static_cast<double>(r.j) * r.j;
    sxy += r.j * r.log_ratio;
  }
  const double m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace qdecay
