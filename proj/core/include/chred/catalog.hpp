#pragma once

#include <string>
#include <vector>

#include "chred/scenario.hpp"

namespace chred {

/// Names of the built-in scenarios, in a stable order.
std::vector<std::string> catalog_list();

/// Canonical JSON text of a built-in scenario. Throws on unknown names.
std::string catalog_json(const std::string& name);

/// Parsed built-in scenario.
Scenario catalog_get(const std::string& name);

}  // namespace chred
