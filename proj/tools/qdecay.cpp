#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qdecay/acceptance.hpp"
#include "qdecay/gallery.hpp"
#include "qdecay/scenario.hpp"

namespace {

constexpr int kFail = 1;
constexpr int kConfig = 2;

int run(const std::string& path, const std::optional<std::uint64_t>& seed, const std::string& out,
        const std::string& check) {
  qdecay::ScenarioConfig config;
  qdecay::Report report;
  try {
    config = qdecay::ScenarioConfig::load(path);
    if (seed) config.seed = *seed;
    if (!out.empty()) config.output_dir = out;
    if (!check.empty()) config.checks = {qdecay::parse_check(check)};
    report = qdecay::run_scenario(config);
    qdecay::emit_report(report, config.output_dir);
  } catch (const qdecay::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  } catch (const qdecay::CapabilityError& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  } catch (const qdecay::IoError& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  }
  for (const auto& [name, result] : report.body["checks"].items())
    std::cout << (result.value("pass", false) ? "PASS  " : "FAIL  ") << name << "\n";
  std::cout << "report written to " << config.output_dir << "\n";
  return report.pass() ? EXIT_SUCCESS : kFail;
}

int list() {
  for (const auto& e : qdecay::gallery_catalog()) {
    std::cout << e.name;
    if (!e.parameters.empty()) std::cout << " (" << e.parameters << ")";
    std::cout << "\n    " << e.description << "\n";
  }
  return EXIT_SUCCESS;
}

int selftest(std::uint64_t seed, const std::string& out) {
  qdecay::AcceptanceOptions options;
  options.seed = seed;
  const auto results = qdecay::run_acceptance(options);
  bool all = true;
  for (const auto& r : results) {
    std::cout << qdecay::format_line(r) << "\n";
    all = all && r.pass;
  }
  if (!out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    std::ofstream f(std::filesystem::path(out) / "selftest.json", std::ios::binary);
    f << qdecay::acceptance_report(results).dump(2) << "\n";
    if (ec || !f) {
      std::cerr << "cannot write " << out << "/selftest.json\n";
      return kConfig;
    }
  }
  return all ? EXIT_SUCCESS : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdecay: curvature decay and volume growth checks on explicit metrics"};
  app.require_subcommand(1);

  std::string config_path, out_dir, check;
  std::optional<std::uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "run a scenario config");
  run_cmd->add_option("config", config_path, "scenario JSON")->required();
  run_cmd->add_option("--seed", seed, "override sampling.seed");
  run_cmd->add_option("--out", out_dir, "override output.dir");
  run_cmd->add_option("--check", check, "run only this check");

  app.add_subcommand("list", "list gallery metrics");

  std::uint64_t selftest_seed = 1;
  std::string selftest_out;
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  self_cmd->add_option("--seed", selftest_seed, "suite seed");
  self_cmd->add_option("--out", selftest_out, "directory for selftest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  if (*run_cmd) return run(config_path, seed, out_dir, check);
  if (*self_cmd) return selftest(selftest_seed, selftest_out);
  return list();
}
