#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chred {

struct CheckRecord {
  std::string id;
  std::string property;  // the identity/criterion this check verifies
  int points_tested = 0;
  int points_skipped = 0;
  double max_residual = 0.0;
  std::string verdict;  // "pass" | "fail" | "degenerate-points-only"
  std::string detail;
};

struct Report {
  std::string scenario_name;
  std::uint64_t seed = 0;
  std::string tool_version;
  int schema_version = 0;
  std::vector<CheckRecord> checks;
  // Wall time is kept out of the serialized report so identical runs are
  // byte-identical; the CLI prints it separately.
  double wall_time_ms = 0.0;

  bool all_pass() const;
};

/// Deterministic JSON body (stable key order, no timestamps).
std::string report_json(const Report& report);

Report report_from_json(const std::string& text);

/// One line per check: scenario,check,verdict,points,skipped,max_residual.
std::string report_csv_summary(const Report& report);

}  // namespace chred
