#pragma once

#include <string>

#include "cdfi/experiments.hpp"

namespace cdfi {

// Strict JSON configuration: unknown keys are errors, parse errors carry line
// and column, and the result is validated with every violation listed.
// Absent lambda defaults to (28 d + 1)^{-1/2}; absent alpha to 0.01 below the
// noise regularity ceiling (0.49 for white noise in d = 1).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON of the resolved configuration (every field, sorted keys).
std::string canonical_config(const ExperimentConfig& cfg);
// SHA-256 hex digest of canonical_config.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace cdfi
