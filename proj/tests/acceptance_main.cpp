#include <cstdlib>
#include <iostream>
#include <string>

#include "qdecay/acceptance.hpp"

int main(int argc, char** argv) {
  qdecay::AcceptanceOptions options;
  if (argc > 1) options.seed = std::stoull(argv[1]);
  if (argc > 2) {
    const auto r = qdecay::run_criterion(std::stoi(argv[2]), options.seed);
    std::cout << qdecay::format_line(r) << "\n      " << r.evidence.dump() << std::endl;
    return r.pass ? EXIT_SUCCESS : EXIT_FAILURE;
  }
  bool all = true;
  for (const auto& r : qdecay::run_acceptance(options)) {
    std::cout << qdecay::format_line(r) << "\n      " << r.evidence.dump() << std::endl;
    all = all && r.pass;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
