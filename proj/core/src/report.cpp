#include "cdfi/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cdfi {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

Json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

template <class T>
void add_unique(std::vector<T>& v, const T& x) {
    for (const auto& y : v)
        if (y == x) return;
    v.push_back(x);
}

}  // namespace

Json to_json(const BoundReport& r) {
    Json j;
    j["experiment"] = r.experiment;
    j["seed"] = r.seed;
    j["magnitude"] = number(r.magnitude);
    j["R"] = number(r.R);
    j["lhs"] = number(r.lhs);
    Json terms = Json::array();
    for (const auto& t : r.rhs_terms) terms.push_back({{"label", t.label}, {"value", number(t.value)}});
    j["rhs_terms"] = terms;
    j["rhs"] = number(r.rhs);
    j["ratio"] = number(r.ratio);
    Json extra = Json::object();
    for (const auto& [k, v] : r.extra) extra[k] = number(v);
    j["extra"] = extra;
    return j;
}

std::string reports_csv(const std::vector<BoundReport>& reports) {
    std::vector<std::string> labels, keys;
    for (const auto& r : reports) {
        for (const auto& t : r.rhs_terms) add_unique(labels, t.label);
        for (const auto& e : r.extra) add_unique(keys, e.first);
    }
    std::ostringstream os;
    os << "experiment,seed,magnitude,R,lhs,rhs,ratio";
    for (const auto& l : labels) os << ",rhs_" << csv_field(l);
    for (const auto& k : keys) os << ',' << csv_field(k);
    os << '\n';
    for (const auto& r : reports) {
        os << csv_field(r.experiment) << ',' << r.seed << ',' << format_double(r.magnitude) << ','
           << format_double(r.R) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
           << format_double(r.ratio);
        for (const auto& l : labels) {
            os << ',';
            for (const auto& t : r.rhs_terms)
                if (t.label == l) {
                    os << format_double(t.value);
                    break;
                }
        }
        for (const auto& k : keys) {
            os << ',';
            if (auto it = r.extra.find(k); it != r.extra.end()) os << format_double(it->second);
        }
        os << '\n';
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["version"] = version;
    j["started"] = started;
    j["finished"] = finished;
    j["outputs"] = outputs;
    return j;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace cdfi
