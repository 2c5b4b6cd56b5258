#pragma once

// The acceptance suite: one check per criterion, each returning a pass flag
// and the numbers that decided it.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qdecay {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  nlohmann::json evidence;
  double seconds = 0.0;  // wall time, kept out of the serialized report
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  // Criterion 10 reruns criteria 1-9 and compares the serialized reports.
  bool determinism = true;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

// Runs a single criterion (1-9).
CriterionResult run_criterion(int id, std::uint64_t seed);

// Timing-free JSON of the results.
nlohmann::json acceptance_report(const std::vector<CriterionResult>& results);

// "PASS  3  comparison equality case (warped models)  (0.41 s)".
std::string format_line(const CriterionResult& result);

}  // namespace qdecay
