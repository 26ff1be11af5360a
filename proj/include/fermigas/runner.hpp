#pragma once

#include <string>
#include <vector>

#include "fermigas/config.hpp"
#include "fermigas/output.hpp"

namespace fermigas {

struct RunResult {
  std::vector<Table> tables;
  int failures = 0;  // failed acceptance checks (verify-all only)
  std::string summary;
};

std::string version_string();

// Computes every table in memory. Sweep entries are spread over `jobs` threads; rows keep sweep order.
RunResult execute(const RunConfig& config, int jobs = 1);

// execute() followed by write_tables() into config.output_directory. Nothing is written on failure.
RunResult run(const RunConfig& config, int jobs = 1);

}  // namespace fermigas
