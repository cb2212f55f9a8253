#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uavnet {

/// One acceptance check: a measured value against its reference band.
struct CriterionCheck {
  int criterion = 0;         // 1..8
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;    // absolute band half-width (0 = boolean check)
  bool passed = false;
  std::string note;          // route / desk-scale substitute when relevant
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240817;
  /// Shrinks the Monte Carlo budgets roughly 10x for a quick smoke pass.
  bool fast = false;
  /// Restrict to one criterion (0 = all).
  int only = 0;
};

/// Runs every acceptance fixture and returns one row per check.
std::vector<CriterionCheck> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 3. analysis-vs-sim urdc suburban 40dB: 0.977 vs 0.972 (tol 0.015)"
std::string format_check(const CriterionCheck& check);

}  // namespace uavnet
