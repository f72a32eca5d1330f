#pragma once

#include <string>
#include <vector>

namespace fwtopo {

struct ClaimResult {
  int id = 0;
  std::string anchor;  // the reproduced statement, in words
  bool passed = false;
  std::string detail;  // measured values and tolerances
  double elapsed_ms = 0.0;
  double budget_ms = 0.0;
};

struct VerifyOptions {
  // Test hook: flips the sign of the full-band N1 before it is checked.
  bool inject_sign_fault = false;
};

// Runs the twelve acceptance claims in order. A claim passes only if its
// numeric check holds and it finishes inside its runtime budget.
std::vector<ClaimResult> run_acceptance(const VerifyOptions& options = {});

}  // namespace fwtopo
