#pragma once

#include <string>
#include <vector>

#include "cdfi/bounds.hpp"
#include "json.hpp"

namespace cdfi {

using Json = nlohmann::ordered_json;

// Round-trip decimal text ("%.17g"); non-finite values as inf, -inf, nan.
std::string format_double(double v);

Json to_json(const BoundReport& r);

// One row per report. Columns: experiment, seed, magnitude, R, lhs, rhs,
// ratio, then one rhs_<label> column per term label and one column per extra
// key, each in order of first appearance.
std::string reports_csv(const std::vector<BoundReport>& reports);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const Json& j);

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string version = CDFI_VERSION;
    std::string started, finished;  // ISO 8601 UTC
    std::vector<std::string> outputs;  // relative to the output directory
    Json to_json() const;
};

std::string utc_timestamp();

}  // namespace cdfi
