#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gossipmesh/scenario.hpp"

namespace gossipmesh {

// Built-in scenario library: each returns a ready-to-run config with its
// expected outcomes embedded, so `gossipmesh --scenario <name>` is
// self-checking.
std::vector<std::string> bundled_scenario_names();
std::optional<ScenarioConfig> bundled_scenario(const std::string& name);

}  // namespace gossipmesh
