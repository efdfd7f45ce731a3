#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "commands.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Coming-down-from-infinity verification lab"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir = "out";
    int threads = 0;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (default: machine parallelism)")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "base seed, overrides the config");
    app.add_flag("--quiet", quiet, "print nothing on success");
    for (const auto& name : cdfi::command_names()) app.add_subcommand(name, "run the " + name + " pipeline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        cdfi::RunManifest manifest;
        manifest.command = command;
        manifest.started = cdfi::utc_timestamp();
        if (threads > 0) omp_set_num_threads(threads);

        cdfi::ExperimentConfig cfg = config_path.empty() ? cdfi::parse_config("{}") : cdfi::load_config(config_path);
        if (*seed_opt) cfg.base_seed = seed;
        cfg.validate();
        manifest.config_hash = cdfi::config_hash(cfg);

        cdfi::CommandOutput res = cdfi::run_command(command, cfg);

        fs::create_directories(out_dir);
        const fs::path out(out_dir);
        cdfi::Json summary = res.summary;
        summary["config_hash"] = manifest.config_hash;
        summary["config"] = cdfi::Json::parse(cdfi::canonical_config(cfg));
        cdfi::write_json((out / "summary.json").string(), summary);
        manifest.outputs.push_back("summary.json");
        cdfi::write_text((out / "reports.csv").string(), cdfi::reports_csv(res.reports));
        manifest.outputs.push_back("reports.csv");
        if (!res.fields.empty()) {
            fs::create_directories(out / "fields");
            for (const auto& f : res.fields) {
                const std::string rel = "fields/" + f.name + ".bin";
                cdfi::write_field((out / rel).string(), f.field, f.meta);
                manifest.outputs.push_back(rel);
                manifest.outputs.push_back(rel + ".json");
            }
        }
        manifest.finished = cdfi::utc_timestamp();
        manifest.outputs.push_back("manifest.json");
        cdfi::write_json((out / "manifest.json").string(), manifest.to_json());

        if (!quiet) std::cout << command << ": " << (res.passed ? "pass" : "FAIL") << " (" << out_dir << ")\n";
        return res.passed ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "cdfi " << command << ": " << e.what() << "\n";
        return 2;
    }
}
