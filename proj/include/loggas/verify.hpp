#pragma once

// The acceptance suite: thirteen numbered checks, each reported as
// (lhs, relation, rhs, tolerance).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace loggas {

struct CheckResult {
  int id = 0;
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Smaller sample sizes; statistical checks keep their thresholds.
  bool fast = false;
  std::uint64_t seed = 20240607;
  unsigned threads = 1;
  /// Test hook: negate the gain summands.
  bool flip_gain_sign = false;
  /// Quadrature tolerance for the field and closed-form checks.
  double tol = 1e-9;
  /// Checks to run (ids 1..13); empty means all.
  std::vector<int> only;
};

inline constexpr int kCheckCount = 13;

std::string check_name(int id);

/// Runs one check. Checks 1/2 and 10/11 share their fixtures; running them
/// separately recomputes the shared part.
CheckResult run_check(int id, const VerifyOptions& opt);

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verification(const VerifyOptions& opt);

nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const VerifyReport& r, const VerifyOptions& opt);

/// One line per check: "[PASS] 7 screening-contract lhs=... rhs=... tol=... (1.2 s) detail".
std::string format_line(const CheckResult& c);

}  // namespace loggas
