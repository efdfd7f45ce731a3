#pragma once

#include <string>
#include <vector>

#include "cdfi/config.hpp"
#include "cdfi/field_io.hpp"
#include "cdfi/report.hpp"

namespace cdfi {

struct FieldDump {
    std::string name;  // file stem under fields/
    ScalarField field;
    FieldMeta meta;
};

struct CommandOutput {
    bool passed = false;
    Json summary = Json::object();
    std::vector<BoundReport> reports;
    std::vector<FieldDump> fields;
};

const std::vector<std::string>& command_names();

// Runs one pipeline. Throws on invalid input or runtime failure; a failed
// check is reported through `passed`.
CommandOutput run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace cdfi
