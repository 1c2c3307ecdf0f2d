#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace nashsg {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  /// Multiplies the analytic Lipschitz constant in the second-moment check.
  /// Values below 1 are a negative control: the check must then fail.
  double l0_scale = 1.0;
};

/// Runs the property checks of every module with fixed seeds and prints one
/// "measured vs bound" line per check to `out`.
std::vector<CheckResult> verify_suite(const VerifyOptions& opts, std::ostream& out);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace nashsg
