#pragma once
#include <string>
#include <vector>

#include "config/scenario.hpp"

namespace orchsim::config {

struct PresetInfo {
    std::string name;
    std::string description;
};

const std::vector<PresetInfo>& preset_list();

bool is_preset(const std::string& name);

// Fully materialized scenario for a registry name; throws ConfigError for
// unknown names.
Scenario preset_scenario(const std::string& name);

}  // namespace orchsim::config
