#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fran/experiment.hpp"

namespace fran::harness {

/// A config key that maps onto a NetworkParams field. The key suffix names
/// the unit: _dbm and _db values are converted to linear on assignment.
struct ParameterKey {
    std::string key;
    std::string section;  // "network" or "catalog"
    std::function<void(NetworkParams&, double)> assign;
    std::function<double(const NetworkParams&)> read;  // in the key's unit
};

const std::vector<ParameterKey>& parameter_keys();
/// nullptr if `key` is not a parameter key.
const ParameterKey* find_parameter(std::string_view key);

/// Sets parameter `key` to `value` (in the key's unit) and validates.
void assign_parameter(NetworkParams& p, const std::string& key, double value);

/// Required keys of the [experiment] section.
const std::vector<std::string>& required_keys();

/// Parses the sectioned key-value format. `origin` prefixes diagnostics.
ExperimentSpec parse_config_text(std::string_view text, const std::string& origin = "config");
/// IoError if the file cannot be read.
ExperimentSpec parse_config(const std::string& path);

/// Text that parses back to an equal spec.
std::string serialize_config(const ExperimentSpec& spec);

}  // namespace fran::harness
