#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdecay/errors.hpp"
#include "qdecay/scenario.hpp"

using namespace qdecay;
using nlohmann::json;

namespace {

json flat_config() {
  return json::parse(R"({
    "name": "flat",
    "metric": {"name": "flat", "params": {"n": 2}},
    "checks": ["decay", "growth"],
    "sampling": {"radii": {"from": 10, "to": 1000, "count": 5},
                 "growth_radii": {"from": 1, "to": 200, "count": 50}, "seed": 3},
    "tolerances": {"decay_C_expected": 0}
  })");
}

const CsvTable* table(const Report& r, const std::string& file) {
  for (const CsvTable& t : r.tables)
    if (t.file == file) return &t;
  return nullptr;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config parsing round trip") {
  const ScenarioConfig c = ScenarioConfig::from_json(flat_config());
  CHECK(c.metric == "flat");
  CHECK(c.checks.size() == 2);
  CHECK(c.radii.values().size() == 5);
  CHECK(c.radii.values().front() == doctest::Approx(10.0));
  CHECK(c.radii.values().back() == doctest::Approx(1000.0));
  REQUIRE(c.seed);
  CHECK(*c.seed == 3);
  const ScenarioConfig again = ScenarioConfig::from_json(c.to_json());
  CHECK(again.to_json() == c.to_json());
}

TEST_CASE("config errors") {
  auto bad = [](const std::function<void(json&)>& edit) {
    json j = flat_config();
    edit(j);
    return j;
  };
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["bogus"] = 1; })), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["sampling"]["radius"] = 1; })), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j.erase("metric"); })), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["checks"] = {"curvature"}; })), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["checks"] = json::array(); })), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["sampling"]["radii"]["to"] = 1; })), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["sampling"]["radii"]["from"] = -1; })),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) {
                    j["sampling"].erase("seed");
                    j["sampling"]["volume_method"] = "monte-carlo";
                  })),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad([](json& j) { j["tolerances"]["decay_C_expected"] = "zero"; })),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::load("/nonexistent/config.json"), ConfigError);

  ScenarioConfig c = ScenarioConfig::from_json(flat_config());
  c.metric = "klein-bottle";
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("capability errors are raised before any check runs") {
  json j = flat_config();
  j["metric"] = {{"name", "collapse"}, {"params", {{"f", 0.5}}}};
  j["checks"] = {"gauss-bonnet"};
  CHECK_THROWS_AS(run_scenario(ScenarioConfig::from_json(j)), CapabilityError);
  j["metric"] = {{"name", "hyperbolic-horocyclic"}};
  j["checks"] = {"growth"};
  CHECK_THROWS_AS(run_scenario(ScenarioConfig::from_json(j)), CapabilityError);
}

TEST_CASE("flat scenario and CSV headers") {
  const Report r = run_scenario(ScenarioConfig::from_json(flat_config()));
  CHECK(r.pass());
  CHECK(r.body["checks"]["decay"]["C_fitted"].get<double>() < 1e-12);
  const CsvTable* decay = table(r, "decay.csv");
  const CsvTable* growth = table(r, "growth.csv");
  REQUIRE(decay);
  REQUIRE(growth);
  CHECK(csv_text(*decay).rfind("t,max_abs_K_times_d2\n", 0) == 0);
  CHECK(csv_text(*growth).rfind("t,vol,stderr\n", 0) == 0);
}

TEST_CASE("prop3 table columns") {
  const json j = json::parse(R"({"metric": {"name": "prop3-estimates", "params": {"jmax": 4}},
                                 "checks": ["prop3-estimates"]})");
  const Report r = run_scenario(ScenarioConfig::from_json(j));
  CHECK(r.pass());
  const CsvTable* t = table(r, "prop3.csv");
  REQUIRE(t);
  CHECK(csv_text(*t).rfind("j,log_vol_Fj,log_t_lower,log_ratio\n", 0) == 0);
  CHECK(t->rows.size() == 4);
}

TEST_CASE("a failing check is recorded without stopping the run") {
  json j = flat_config();
  j["tolerances"]["decay_C_expected"] = 5;
  const Report r = run_scenario(ScenarioConfig::from_json(j));
  CHECK_FALSE(r.pass());
  CHECK_FALSE(r.body["checks"]["decay"]["pass"].get<bool>());
  CHECK(r.body["checks"]["growth"]["pass"].get<bool>());
}

TEST_CASE("reports are deterministic and carry no wall time") {
  json j = flat_config();
  j["sampling"]["volume_method"] = "monte-carlo";
  j["sampling"]["mc_budget"] = 20000;
  j["sampling"]["growth_radii"] = {{"from", 1}, {"to", 100}, {"count", 12}};
  j["checks"] = {"growth"};
  const ScenarioConfig c = ScenarioConfig::from_json(j);
  const Report a = run_scenario(c), b = run_scenario(c);
  CHECK(a.body.dump() == b.body.dump());
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t k = 0; k < a.tables.size(); ++k) CHECK(csv_text(a.tables[k]) == csv_text(b.tables[k]));

  const auto dir = std::filesystem::temp_directory_path() / "qdecay_scenario_test";
  std::filesystem::remove_all(dir);
  emit_report(a, (dir / "a").string());
  emit_report(b, (dir / "b").string());
  for (const char* f : {"report.json", "growth.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  CHECK(std::filesystem::exists(dir / "a" / "timing.json"));
  CHECK(slurp(dir / "a" / "report.json").find("wall") == std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit_report I/O errors") {
  const Report r = run_scenario(ScenarioConfig::from_json(flat_config()));
  const auto file = std::filesystem::temp_directory_path() / "qdecay_not_a_dir";
  std::ofstream(file) << "x";
  CHECK_THROWS_AS(emit_report(r, (file / "out").string()), IoError);
  std::filesystem::remove(file);
}
