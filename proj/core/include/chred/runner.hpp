#pragma once

#include <optional>
#include <string>

#include "chred/report.hpp"
#include "chred/scenario.hpp"

namespace chred {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<double> fd_step;
  std::optional<std::string> trajectory_dir;  // simulate checks export CSV here
};

/// Executes every configured check through the owning module. Module errors
/// surface as failed check records without aborting the remainder. The
/// report is deterministic given scenario + seed.
Report run_scenario(const Scenario& scenario, const RunOverrides& overrides = {});

}  // namespace chred
