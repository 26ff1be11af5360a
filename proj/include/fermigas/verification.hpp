#pragma once

#include <string>
#include <vector>

namespace fermigas {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string threshold;
  std::string note;
  double seconds = 0.0;  // wall time; kept out of emitted tables
};

constexpr int kCriterionCount = 16;

// Runs one check (1..16). Exceptions inside a check become a failed result carrying the message.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all_criteria();

}  // namespace fermigas
