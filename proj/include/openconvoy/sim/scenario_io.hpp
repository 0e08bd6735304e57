#pragma once

#include <string>

#include "openconvoy/sim/scenario.hpp"

namespace openconvoy::sim {

/// Parses a scenario from JSON text. Parse failures raise ConfigError with a
/// line number; semantic failures name the offending field. Unknown top-level
/// keys are rejected (they are almost always typos).
ScenarioConfig load_scenario_json(const std::string& text,
                                  const std::string& source_name = "<inline>");

ScenarioConfig load_scenario_file(const std::string& path);

/// Canonical JSON for a config: load(save(c)) == c. Embedded in run
/// manifests so any run can be reproduced from its manifest alone.
std::string scenario_to_json(const ScenarioConfig& config);

/// The bundled paper-repro scenario: three vehicles, 15 m desired gap,
/// leader speed profile 1 -> 2 -> 1 m/s over three minutes.
ScenarioConfig paper_repro_scenario();
const char* paper_repro_scenario_json();

}  // namespace openconvoy::sim
