#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "popper/app/scenario.hpp"

namespace popper::app {

/// popper-nolens, kim-shih, strekalov.
const std::vector<std::string>& preset_names();

/// Built-in preset by name. Throws ConfigError for an unknown name.
Scenario preset(std::string_view name);

/// Reads `ref` as a file if it exists, otherwise as a preset name.
Scenario resolve_scenario(const std::string& ref);

}  // namespace popper::app
