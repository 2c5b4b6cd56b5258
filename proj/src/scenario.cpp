#include "qdecay/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qdecay/acceptance.hpp"
#include "qdecay/comparison.hpp"
#include "qdecay/gallery.hpp"
#include "qdecay/growth.hpp"
#include "qdecay/prop3.hpp"

namespace qdecay {

using json = nlohmann::json;

namespace {

const std::vector<std::pair<CheckKind, std::string>> kCheckNames = {
    {CheckKind::decay, "decay"},
    {CheckKind::lower_decay, "lower-decay"},
    {CheckKind::growth, "growth"},
    {CheckKind::comparison, "comparison"},
    {CheckKind::gauss_bonnet, "gauss-bonnet"},
    {CheckKind::family_condition, "family-condition"},
    {CheckKind::prop3_estimates, "prop3-estimates"},
    {CheckKind::acceptance, "acceptance"},
};

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::string text(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

RadiusRange parse_range(const json& j, RadiusRange fallback, const std::string& where) {
  RadiusRange r = fallback;
  if (j.is_array()) {
    r.explicit_values.clear();
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(where + " entries must be numbers");
      r.explicit_values.push_back(v.get<double>());
    }
    if (r.explicit_values.empty()) throw ConfigError(where + " is empty");
    return r;
  }
  reject_unknown_keys(j, {"from", "to", "count"}, where);
  r.from = number(j, "from", r.from);
  r.to = number(j, "to", r.to);
  r.count = integer(j, "count", r.count);
  return r;
}

json range_json(const RadiusRange& r) {
  if (!r.explicit_values.empty()) return r.explicit_values;
  return {{"from", r.from}, {"to", r.to}, {"count", r.count}};
}

void validate_range(const RadiusRange& r, const std::string& where) {
  const std::vector<double> v = r.values();
  if (v.empty()) throw ConfigError(where + " is empty");
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0)) throw ConfigError(where + " must be positive");
    if (k > 0 && !(v[k] > v[k - 1])) throw ConfigError(where + " must be increasing");
  }
}

double tolerance(const json& tol, const std::string& key, double fallback) {
  return number(tol, key, fallback);
}

// ---------------------------------------------------------------------------
// Metric resolution

struct Subject {
  std::optional<ChartedMetric> metric;
  std::optional<GrowthCurve> model_curve;
  std::optional<CollapseFamily> collapse;
  std::optional<int> prop3_jmax;
  std::optional<WarpedProfile> lemma31_h;
  std::optional<int> criterion;
  std::vector<std::string> warnings;
};

BaseSpace parse_base(const json& p) {
  const std::string base = text(p, "base", "circle");
  if (base == "circle") return BaseSpace::circle(number(p, "length", 2.0 * std::numbers::pi));
  const int dim = integer(p, "base_dimension", 2);
  try {
    if (base == "sphere") return BaseSpace::round_sphere(dim, number(p, "curvature", 1.0));
    if (base == "torus") return BaseSpace::flat_torus(dim, number(p, "period", 2.0 * std::numbers::pi));
    if (base == "hyperbolic") {
      if (dim != 2) throw ConfigError("hyperbolic base must have base_dimension 2");
      return BaseSpace::hyperbolic_surface(number(p, "curvature", -1.0));
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown base '" + base + "' (circle, sphere, torus, hyperbolic)");
}

Subject resolve(const ScenarioConfig& c) {
  const json& p = c.params;
  const std::string& name = c.metric;
  Subject s;
  auto keys = [&](std::set<std::string> allowed) { reject_unknown_keys(p, allowed, "metric params of " + name); };
  try {
    if (name == "flat") {
      keys({"n"});
      s.metric = flat_metric(integer(p, "n", 2));
    } else if (name == "flat-polar") {
      keys({});
      s.metric = flat_polar_metric();
    } else if (name == "sphere") {
      keys({});
      s.metric = round_sphere_metric();
    } else if (name == "hyperbolic") {
      keys({"t_max"});
      s.metric = hyperbolic_metric(number(p, "t_max", 300.0));
    } else if (name == "hyperbolic-horocyclic") {
      keys({});
      s.metric = hyperbolic_horocyclic_metric();
    } else if (name == "cone") {
      keys({"eps"});
      s.metric = cone_metric(number(p, "eps", 0.5));
    } else if (name == "example1") {
      keys({"c", "base", "base_dimension", "curvature", "length", "period"});
      if (!p.contains("c")) throw ConfigError("example1 needs parameter c");
      s.metric = example1_end(number(p, "c", 1.0), parse_base(p), &s.warnings);
    } else if (name == "example2") {
      keys({"c"});
      if (!p.contains("c")) throw ConfigError("example2 needs parameter c");
      s.metric = example2_plane(number(p, "c", 0.0));
    } else if (name == "example3") {
      keys({"A0", "L", "jmax"});
      s.model_curve = example3_growth_model(number(p, "A0", 1.0), number(p, "L", 1.0), integer(p, "jmax", 20));
    } else if (name == "collapse") {
      keys({"f"});
      s.collapse = collapse_family(number(p, "f", 1.0 / std::sqrt(2.0)));
      s.metric = s.collapse->metric;
    } else if (name == "prop3-estimates") {
      keys({"jmax"});
      const int jmax = integer(p, "jmax", 10);
      if (jmax < 2) throw ConfigError("prop3-estimates needs jmax >= 2");
      s.prop3_jmax = jmax;
    } else if (name == "lemma31") {
      keys({"profile", "c"});
      const std::string profile = text(p, "profile", "flat");
      WarpedProfile h;
      h.base = BaseSpace::circle();
      h.t_min = 0.0;
      h.t_max = 1e12;
      if (profile == "flat") {
        h.warp = make_radial_function([](const auto& t) { return t; });
      } else if (profile == "example2") {
        h.warp = capped_power_warp(number(p, "c", 0.5));
      } else {
        throw ConfigError("unknown lemma31 profile '" + profile + "' (flat, example2)");
      }
      s.lemma31_h = h;
    } else if (name == "acceptance") {
      keys({"criterion"});
      const int id = integer(p, "criterion", 0);
      if (id < 1 || id > 9) throw ConfigError("acceptance criterion must be in 1..9");
      s.criterion = id;
    } else {
      throw ConfigError("unknown gallery metric '" + name + "'");
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

void check_capabilities(const ScenarioConfig& c, const Subject& s) {
  auto fail = [&](CheckKind k, const std::string& why) {
    throw CapabilityError("check '" + to_string(k) + "' cannot run on " + c.metric + ": " + why);
  };
  for (CheckKind k : c.checks) {
    switch (k) {
      case CheckKind::decay:
        if (!s.metric && !s.lemma31_h) fail(k, "no metric chart");
        break;
      case CheckKind::lower_decay:
        if (!s.metric) fail(k, "no metric chart");
        break;
      case CheckKind::growth:
      case CheckKind::comparison:
        if (s.model_curve) {
          if (k == CheckKind::comparison && !c.tolerances.contains("comparison_C"))
            fail(k, "a growth model needs tolerances.comparison_C");
          break;
        }
        if (!s.metric) fail(k, "no metric chart or growth model");
        if (c.volume_method == "quadrature" && !(s.metric->radial() && s.metric->radial()->sphere_area))
          fail(k, "quadrature volumes need a sphere-area map");
        if (c.volume_method == "monte-carlo" && !ball_region(*s.metric, 1.0))
          fail(k, "no bounded sampling region for Monte Carlo");
        break;
      case CheckKind::gauss_bonnet:
        if (!s.metric || s.metric->dimension() != 2) fail(k, "needs a surface");
        if (!s.metric->radial() || !s.metric->radial()->profile || s.metric->radial()->profile->t_min != 0.0)
          fail(k, "needs a capped surface of revolution");
        break;
      case CheckKind::family_condition:
        if (!s.collapse) fail(k, "needs a collapse family");
        break;
      case CheckKind::prop3_estimates:
        if (!s.prop3_jmax) fail(k, "needs the prop3-estimates construction");
        break;
      case CheckKind::acceptance:
        if (!s.criterion) fail(k, "needs metric 'acceptance' with a criterion");
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// Checks

struct Context {
  const ScenarioConfig& config;
  const Subject& subject;
  std::uint64_t seed;
  std::optional<GrowthCurve> curve;
  std::optional<double> C_lower;
  std::vector<CsvTable> tables;
};

DecayOptions decay_options(const Context& ctx) {
  DecayOptions o;
  o.radii = ctx.config.radii.values();
  o.points_per_radius = ctx.config.points_per_radius;
  o.planes_per_point = ctx.config.planes_per_point;
  o.seed = ctx.seed;
  o.r_min = 0.0;
  return o;
}

json series_json(const std::vector<std::pair<double, double>>& s) {
  json out = json::array();
  for (const auto& [t, v] : s) out.push_back({t, v});
  return out;
}

bool expectation(const json& tol, const std::string& key, double value, const std::string& rel_key,
                 double rel_default, json& out) {
  if (!tol.contains(key)) return true;
  const double expected = number(tol, key, 0.0);
  const double rel = tolerance(tol, rel_key, rel_default);
  const bool ok = expected == 0.0 ? std::abs(value) <= 1e-12 : std::abs(value - expected) <= rel * std::abs(expected);
  out[key] = expected;
  out[key + "_ok"] = ok;
  return ok;
}

json check_decay(Context& ctx) {
  const json& tol = ctx.config.tolerances;
  json r;
  if (ctx.subject.lemma31_h) {
    const ConformalConstruction cc = conformal_quadratic_construction(
        *ctx.subject.lemma31_h, smoothed_distance(), ctx.config.radii.values(),
        tolerance(tol, "lemma31_c_max", 2.0));
    const auto& k = cc.conditions;
    r = {{"C_fitted", cc.C_fitted},
         {"divergent", cc.divergent},
         {"distance_bound_ok", cc.distance_bound_ok},
         {"generic_agreement", cc.generic_agreement},
         {"conditions", {{"phi_excess", k.phi_excess}, {"gap", k.gap}, {"gradient", k.gradient},
                         {"hessian", k.hessian}, {"c_fitted", k.c_fitted}}},
         {"per_radius", series_json(cc.weighted_decay)},
         {"radius_coordinate", "d_h"}};
    bool pass = !cc.divergent && cc.distance_bound_ok && cc.generic_agreement < tolerance(tol, "generic_rel", 1e-5);
    pass = expectation(tol, "decay_C_expected", cc.C_fitted, "decay_C_rel", 0.1, r) && pass;
    r["pass"] = pass;
    CsvTable t{"decay.csv", {"t", "max_abs_K_times_d2"}, {}};
    for (const auto& [d, v] : cc.weighted_decay) t.rows.push_back({d, v});
    ctx.tables.push_back(std::move(t));
    return r;
  }
  const DecayReport d = decay_constant(*ctx.subject.metric, decay_options(ctx));
  ctx.C_lower = d.C_lower;
  r = {{"C_fitted", d.C_fitted},
       {"C_lower", d.C_lower},
       {"slope", d.slope},
       {"divergent", d.divergent},
       {"samples", d.samples.size()},
       {"per_radius", series_json(d.per_radius)}};
  const bool expect_divergent = tol.value("expect_divergent", false);
  bool pass = d.divergent == expect_divergent;
  if (tol.contains("decay_C_max")) {
    const bool ok = d.C_fitted <= number(tol, "decay_C_max", 0.0);
    r["decay_C_max_ok"] = ok;
    pass = pass && ok;
  }
  pass = expectation(tol, "decay_C_expected", d.C_fitted, "decay_C_rel", 0.1, r) && pass;
  r["pass"] = pass;
  CsvTable t{"decay.csv", {"t", "max_abs_K_times_d2"}, {}};
  for (const auto& [radius, v] : d.per_radius) t.rows.push_back({radius, v});
  ctx.tables.push_back(std::move(t));
  return r;
}

json check_lower_decay(Context& ctx) {
  const LowerDecayReport d = lower_decay_check(*ctx.subject.metric, decay_options(ctx));
  ctx.C_lower = d.C_lower;
  const bool expect_divergent = ctx.config.tolerances.value("expect_lower_divergent", false);
  CsvTable t{"lower_decay.csv", {"t", "max_neg_K_times_d2"}, {}};
  for (const auto& [radius, v] : d.per_radius) t.rows.push_back({radius, v});
  ctx.tables.push_back(std::move(t));
  return {{"C_lower", d.C_lower},
          {"slope", d.slope},
          {"divergent", d.divergent},
          {"per_radius", series_json(d.per_radius)},
          {"pass", d.divergent == expect_divergent}};
}

const GrowthCurve& ensure_curve(Context& ctx) {
  if (ctx.curve) return *ctx.curve;
  if (ctx.subject.model_curve) {
    ctx.curve = *ctx.subject.model_curve;
  } else {
    VolumeOptions o;
    o.method = ctx.config.volume_method == "monte-carlo" ? VolumeMethod::monte_carlo : VolumeMethod::quadrature;
    o.mc_budget = ctx.config.mc_budget;
    o.seed = ctx.seed;
    ctx.curve = growth_curve(*ctx.subject.metric, ctx.config.growth_radii.values(), o);
  }
  return *ctx.curve;
}

json check_growth(Context& ctx) {
  const json& tol = ctx.config.tolerances;
  const GrowthCurve& curve = ensure_curve(ctx);
  json r;
  bool pass = true;
  try {
    curve.validate();
    r["valid"] = true;
  } catch (const Error& e) {
    r["valid"] = false;
    r["validation_error"] = e.what();
    pass = false;
  }
  r["method"] = to_string(curve.method);
  r["n"] = curve.n;
  r["final_volume"] = curve.volume.back();
  r["loglog_slope"] = loglog_slope(curve, tolerance(tol, "loglog_from", 0.0));
  r["tail_integral"] = growth_tail_integral(curve);
  try {
    const SlowGrowthReport s = slow_growth_check(curve, tolerance(tol, "slow_fraction", 0.1));
    r["slow"] = {{"flag", s.slow},
                 {"reference_t", s.reference_t},
                 {"reference_ratio", s.reference_ratio},
                 {"liminf_estimate", s.liminf_estimate},
                 {"witness", series_json(s.witness)}};
    if (tol.contains("expect_slow")) {
      const bool ok = s.slow == tol.at("expect_slow").get<bool>();
      r["expect_slow_ok"] = ok;
      pass = pass && ok;
    }
  } catch (const RangeError& e) {
    r["slow"] = {{"error", e.what()}};
    if (tol.contains("expect_slow")) pass = false;
  }
  if (tol.contains("loglog_slope_expected")) {
    const double want = number(tol, "loglog_slope_expected", 0.0);
    const bool ok = std::abs(r["loglog_slope"].get<double>() - want) <= tolerance(tol, "loglog_slope_tol", 0.01);
    r["loglog_slope_ok"] = ok;
    pass = pass && ok;
  }
  if (tol.contains("volume_max")) {
    const bool ok = curve.volume.back() <= number(tol, "volume_max", 0.0);
    r["volume_max_ok"] = ok;
    pass = pass && ok;
  }
  r["pass"] = pass;
  CsvTable t{"growth.csv", {"t", "vol", "stderr"}, {}};
  for (std::size_t k = 0; k < curve.size(); ++k) t.rows.push_back({curve.t[k], curve.volume[k], curve.stderr_[k]});
  ctx.tables.push_back(std::move(t));
  return r;
}

json check_comparison(Context& ctx) {
  const json& tol = ctx.config.tolerances;
  double C;
  std::string source;
  if (tol.contains("comparison_C")) {
    C = number(tol, "comparison_C", 0.0);
    source = "tolerances";
  } else {
    if (!ctx.C_lower) ctx.C_lower = lower_decay_check(*ctx.subject.metric, decay_options(ctx)).C_lower;
    C = *ctx.C_lower;
    source = "lower-decay";
  }
  const GrowthCurve& curve = ensure_curve(ctx);
  const VolumeComparisonReport v = volume_comparison_check(curve, comparison_params(C, curve.n));
  return {{"C", C},
          {"C_source", source},
          {"C0_fitted", v.C0_fitted},
          {"C0_comparison1", v.C0_comparison1},
          {"C0_comparison2", v.C0_comparison2},
          {"comparison1_ok", v.comparison1_ok},
          {"comparison2_ok", v.comparison2_ok},
          {"refinement_change1", v.refinement_change1},
          {"refinement_change2", v.refinement_change2},
          {"extension_change1", v.extension_change1},
          {"extension_change2", v.extension_change2},
          {"pass", v.comparison1_ok && v.comparison2_ok}};
}

json check_gauss_bonnet(Context& ctx) {
  const json& tol = ctx.config.tolerances;
  const GaussBonnetReport g = gauss_bonnet_disk(*ctx.subject.metric, ctx.config.gauss_bonnet_T);
  json r = {{"T", g.T},
            {"boundary_total", g.boundary_total},
            {"area_total", g.area_total},
            {"agreement", g.agreement}};
  bool pass = g.agreement < tolerance(tol, "gauss_bonnet_agreement", 1e-4);
  if (tol.contains("gauss_bonnet_expected")) {
    const double want = number(tol, "gauss_bonnet_expected", 0.0);
    const bool ok = std::abs(g.boundary_total - want) < tolerance(tol, "gauss_bonnet_tol", 1e-3);
    r["expected"] = want;
    r["expected_ok"] = ok;
    pass = pass && ok;
  }
  r["pass"] = pass;
  return r;
}

json check_family(Context& ctx) {
  const FamilyConditionReport f =
      family_condition_check(ctx.subject.collapse->family, ctx.config.family_from, ctx.config.family_to);
  return {{"beta", ctx.subject.collapse->beta},
          {"sup_first", f.sup_first},
          {"sup_second", f.sup_second},
          {"sup_first_extended", f.sup_first_extended},
          {"sup_second_extended", f.sup_second_extended},
          {"slope_first", f.slope_first},
          {"slope_second", f.slope_second},
          {"stable_first", f.stable_first},
          {"stable_second", f.stable_second},
          {"pass", f.holds}};
}

json check_prop3(Context& ctx) {
  const json& tol = ctx.config.tolerances;
  const int jmax = *ctx.subject.prop3_jmax;
  std::vector<Prop3Estimate> rows;
  CsvTable t{"prop3.csv", {"j", "log_vol_Fj", "log_t_lower", "log_ratio"}, {}};
  for (int j = 1; j <= jmax; ++j) {
    const Prop3Estimate e = prop3_log_estimates(j);
    t.rows.push_back({static_cast<double>(j), e.volume.log(), e.t_lower.log(), e.log_ratio});
    if (j >= 2) rows.push_back(e);
  }
  ctx.tables.push_back(std::move(t));
  const double slope = prop3_ratio_slope(rows);
  const bool slope_ok = std::abs(slope + 4.0) <= tolerance(tol, "prop3_slope_tol", 1e-3);

  double gluing = 0.0;
  for (const GluingRow& g : prop3_gluing_table(jmax)) gluing = std::max(gluing, g.defect);
  const bool gluing_ok = gluing <= tolerance(tol, "gluing_defect", 1e-12);

  json flows = json::array();
  bool flow_ok = true;
  const double D = tolerance(tol, "flow_D", 2.5);
  for (int j = 1; j <= std::min(jmax, 4); ++j) {
    const FlowBound b = prop3_gradient_flow_bound(prop3_flow_profile(j), D);
    flows.push_back({{"j", j},
                     {"total", b.total},
                     {"reference", b.reference},
                     {"D_fitted", b.D_fitted},
                     {"bound", b.bound},
                     {"windows_ok", b.windows_ok},
                     {"total_ok", b.total_ok}});
    flow_ok = flow_ok && b.windows_ok && b.total_ok;
  }
  return {{"slope", slope},
          {"slope_ok", slope_ok},
          {"gluing_max_defect", gluing},
          {"gluing_ok", gluing_ok},
          {"flow", flows},
          {"flow_ok", flow_ok},
          {"pass", slope_ok && gluing_ok && flow_ok}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(CheckKind kind) {
  for (const auto& [k, name] : kCheckNames)
    if (k == kind) return name;
  return "?";
}

CheckKind parse_check(const std::string& name) {
  for (const auto& [k, n] : kCheckNames)
    if (n == name) return k;
  throw ConfigError("unknown check '" + name + "'");
}

std::vector<double> RadiusRange::values() const {
  if (!explicit_values.empty()) return explicit_values;
  if (!(from > 0.0) || !(to > from) || count < 2)
    throw ConfigError("radius range needs 0 < from < to and count >= 2");
  return geometric_grid(from, to, count);
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  reject_unknown_keys(j, {"name", "metric", "checks", "sampling", "tolerances", "output"}, "scenario");
  ScenarioConfig c;
  c.name = text(j, "name", "");
  if (!j.contains("metric")) throw ConfigError("scenario needs a metric");
  const json& m = j.at("metric");
  if (m.is_string()) {
    c.metric = m.get<std::string>();
  } else {
    reject_unknown_keys(m, {"name", "params"}, "metric");
    c.metric = text(m, "name", "");
    if (m.contains("params")) {
      if (!m.at("params").is_object()) throw ConfigError("metric params must be an object");
      c.params = m.at("params");
    }
  }
  if (c.metric.empty()) throw ConfigError("metric name is empty");

  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) throw ConfigError("checks must be an array");
    for (const auto& k : j.at("checks")) {
      if (!k.is_string()) throw ConfigError("check names must be strings");
      const CheckKind kind = parse_check(k.get<std::string>());
      if (std::find(c.checks.begin(), c.checks.end(), kind) == c.checks.end()) c.checks.push_back(kind);
    }
  }

  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    reject_unknown_keys(s, {"radii", "growth_radii", "points_per_radius", "planes_per_point", "volume_method",
                            "mc_budget", "seed", "gauss_bonnet_T", "family_range"},
                        "sampling");
    if (s.contains("radii")) c.radii = parse_range(s.at("radii"), c.radii, "sampling.radii");
    if (s.contains("growth_radii"))
      c.growth_radii = parse_range(s.at("growth_radii"), c.growth_radii, "sampling.growth_radii");
    c.points_per_radius = integer(s, "points_per_radius", c.points_per_radius);
    c.planes_per_point = integer(s, "planes_per_point", c.planes_per_point);
    c.volume_method = text(s, "volume_method", c.volume_method);
    if (s.contains("mc_budget")) {
      if (!nonnegative_integer(s.at("mc_budget"))) throw ConfigError("mc_budget must be a positive integer");
      c.mc_budget = s.at("mc_budget").get<std::size_t>();
    }
    if (s.contains("seed")) {
      if (!nonnegative_integer(s.at("seed"))) throw ConfigError("seed must be a nonnegative integer");
      c.seed = s.at("seed").get<std::uint64_t>();
    }
    c.gauss_bonnet_T = number(s, "gauss_bonnet_T", c.gauss_bonnet_T);
    if (s.contains("family_range")) {
      const json& f = s.at("family_range");
      if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number())
        throw ConfigError("family_range must be [from, to]");
      c.family_from = f[0].get<double>();
      c.family_to = f[1].get<double>();
    }
  }
  if (j.contains("tolerances")) {
    if (!j.at("tolerances").is_object()) throw ConfigError("tolerances must be an object");
    c.tolerances = j.at("tolerances");
  }
  if (j.contains("output")) {
    reject_unknown_keys(j.at("output"), {"dir"}, "output");
    c.output_dir = text(j.at("output"), "dir", c.output_dir);
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return from_json(j);
}

void ScenarioConfig::validate() const {
  if (checks.empty()) throw ConfigError("no checks requested");
  validate_range(radii, "sampling.radii");
  validate_range(growth_radii, "sampling.growth_radii");
  if (points_per_radius < 1 || planes_per_point < 0) throw ConfigError("invalid sampling counts");
  if (volume_method != "quadrature" && volume_method != "monte-carlo")
    throw ConfigError("volume_method must be quadrature or monte-carlo");
  if (volume_method == "monte-carlo" && !seed) throw ConfigError("Monte Carlo volumes need sampling.seed");
  if (volume_method == "monte-carlo" && mc_budget == 0) throw ConfigError("mc_budget must be positive");
  if (!(gauss_bonnet_T > 0.0)) throw ConfigError("gauss_bonnet_T must be positive");
  if (!(family_from > 0.0) || !(family_to > family_from)) throw ConfigError("family_range must be increasing");
  for (const auto& [key, value] : tolerances.items())
    if (!value.is_number() && !value.is_boolean()) throw ConfigError("tolerance '" + key + "' must be a number or flag");
}

json ScenarioConfig::to_json() const {
  json checks_json = json::array();
  for (CheckKind k : checks) checks_json.push_back(to_string(k));
  json sampling = {{"radii", range_json(radii)},
                   {"growth_radii", range_json(growth_radii)},
                   {"points_per_radius", points_per_radius},
                   {"planes_per_point", planes_per_point},
                   {"volume_method", volume_method},
                   {"mc_budget", mc_budget},
                   {"gauss_bonnet_T", gauss_bonnet_T},
                   {"family_range", {family_from, family_to}}};
  if (seed) sampling["seed"] = *seed;
  return {{"name", name},
          {"metric", {{"name", metric}, {"params", params}}},
          {"checks", checks_json},
          {"sampling", sampling},
          {"tolerances", tolerances},
          {"output", {{"dir", output_dir}}}};
}

bool Report::pass() const { return body.value("pass", false); }

Report run_scenario(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const Subject subject = resolve(config);
  check_capabilities(config, subject);

  Context ctx{config, subject, config.seed.value_or(1), std::nullopt, std::nullopt, {}};
  json results = json::object();
  bool all = true;
  for (const auto& [kind, name] : kCheckNames) {
    if (std::find(config.checks.begin(), config.checks.end(), kind) == config.checks.end()) continue;
    json r;
    try {
      switch (kind) {
        case CheckKind::decay: r = check_decay(ctx); break;
        case CheckKind::lower_decay: r = check_lower_decay(ctx); break;
        case CheckKind::growth: r = check_growth(ctx); break;
        case CheckKind::comparison: r = check_comparison(ctx); break;
        case CheckKind::gauss_bonnet: r = check_gauss_bonnet(ctx); break;
        case CheckKind::family_condition: r = check_family(ctx); break;
        case CheckKind::prop3_estimates: r = check_prop3(ctx); break;
        case CheckKind::acceptance: {
          const CriterionResult c = run_criterion(*subject.criterion, ctx.seed);
          r = {{"criterion", c.id}, {"title", c.title}, {"evidence", c.evidence}, {"pass", c.pass}};
          break;
        }
      }
    } catch (const Error& e) {
      r = {{"pass", false}, {"error", e.what()}, {"error_kind", e.kind()}};
    }
    all = all && r.value("pass", false);
    results[name] = std::move(r);
  }

  Report report;
  report.body = {{"scenario", config.to_json()},
                 {"warnings", subject.warnings},
                 {"checks", results},
                 {"provenance",
                  {{"seed", ctx.seed},
                   {"radii", config.radii.values()},
                   {"growth_radii", config.growth_radii.values()},
                   {"tolerances", config.tolerances}}},
                 {"pass", all}};
  report.tables = std::move(ctx.tables);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string csv_text(const CsvTable& table) {
  std::ostringstream out;
  for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << "\n";
  }
  return out.str();
}

void emit_report(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw IoError("cannot write " + path.string());
  };
  write("report.json", report.body.dump(2) + "\n");
  for (const CsvTable& t : report.tables) write(t.file, csv_text(t));
  write("timing.json", json({{"wall_seconds", report.wall_seconds}}).dump(2) + "\n");
}

}  // namespace qdecay
