#pragma once

// JSON configuration format for NetworkSpec.
//
// Top-level keys: params, waveguides, cavities, couplings, pulses, probes, sim.
// Complex numbers are written as [re, im] (a bare number is read as real).
// An infinite cavity lifetime is written as null or omitted.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wgqed/model.hpp"

namespace wgqed {

using json = nlohmann::json;

/// Throws ConfigError on malformed documents. Does not run validate_network.
NetworkSpec network_from_json(const json& doc);
json network_to_json(const NetworkSpec& spec);

/// Reads and parses a configuration file; throws ConfigError("config not
/// found: ...") when the path does not exist.
NetworkSpec load_network(const std::filesystem::path& path);

json schedule_to_json(const TuningSchedule& s);
TuningSchedule schedule_from_json(const json& j);

}  // namespace wgqed
