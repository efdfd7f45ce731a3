#include "cdfi/config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cdfi {

namespace {

using nlohmann::json;

// Reads the members of one JSON object and rejects any key left unread.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw std::invalid_argument(where() + " must be an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw std::invalid_argument("key '" + qualified(key) + "' has the wrong type");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }

    Section child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        static const json empty = json::object();
        return Section(it == j_.end() ? empty : *it, qualified(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw std::invalid_argument("unknown key '" + qualified(it.key()) + "'");
    }

private:
    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where() const { return path_.empty() ? "configuration" : "'" + path_ + "'"; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        // The library message already carries "line L, column C".
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    Section top(root, "");
    top.read("kind", c.nl.kind);
    top.read("m", c.nl.m);
    top.read("alpha_log", c.nl.alpha_log);
    top.read("g_sup", c.nl.g_sup);
    top.read("d", c.d);
    top.read("nx", c.nx);
    top.read("sigma", c.sigma);
    top.read("R", c.R);
    top.read("ensemble", c.ensemble);
    top.read("base_seed", c.base_seed);
    top.read("dump_fields", c.dump_fields);
    const bool has_alpha = top.has("alpha"), has_lambda = top.has("lambda");
    top.read("alpha", c.alpha);
    top.read("lambda", c.lambda);
    {
        Section s = top.child("noise");
        std::string kind = c.noise.name();
        s.read("kind", kind);
        s.read("lambda", c.noise.lambda);
        s.finish();
        c.noise.kind = parse_noise_kind(kind);
    }
    {
        Section s = top.child("boundary");
        std::string family = to_string(c.boundary);
        s.read("family", family);
        s.read("magnitudes", c.magnitudes);
        s.finish();
        c.boundary = parse_boundary_family(family);
    }
    {
        Section s = top.child("ode");
        s.read("x0", c.ode.x0);
        s.read("n_steps", c.ode.n_steps);
        s.read("paths", c.ode.paths);
        s.read("brownian", c.ode.brownian);
        s.finish();
    }
    {
        Section s = top.child("tails");
        s.read("quantile", c.tails.quantile);
        s.read("samples_file", c.tails.samples_file);
        s.finish();
    }
    {
        Section s = top.child("invariant");
        s.read("nx", c.invariant.nx);
        s.read("samples", c.invariant.samples);
        s.read("burn_in", c.invariant.burn_in);
        s.read("thin", c.invariant.thin);
        s.read("weighted", c.invariant.weighted);
        s.read("spde_realizations", c.invariant.spde_realizations);
        s.finish();
    }
    {
        Section s = top.child("schauder");
        s.read("scales", c.schauder.scales);
        s.read("nx", c.schauder.nx);
        s.finish();
    }
    {
        Section s = top.child("commutator");
        s.read("fields", c.commutator.fields);
        s.read("nx", c.commutator.nx);
        s.read("modes", c.commutator.modes);
        s.read("scales", c.commutator.scales);
        s.finish();
    }
    {
        Section s = top.child("interp");
        s.read("fields", c.interp.fields);
        s.read("nx", c.interp.nx);
        s.finish();
    }
    {
        Section s = top.child("noise_norm");
        s.read("realizations", c.noise_norm.realizations);
        s.read("nx_variance", c.noise_norm.nx_variance);
        s.read("nx_dense", c.noise_norm.nx_dense);
        s.read("dense_count", c.noise_norm.dense_count);
        s.read("dense_realizations", c.noise_norm.dense_realizations);
        s.finish();
    }
    top.finish();

    if (!has_lambda && c.d >= 1) c.lambda = default_lambda(c.d);
    if (!has_alpha) {
        const double ceiling = c.noise.kind == NoiseKind::none ? 0.5 : c.noise.regularity_ceiling(c.d);
        c.alpha = ceiling - 0.01;
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string canonical_config(const ExperimentConfig& c) {
    json j;
    j["kind"] = c.nl.kind;
    j["m"] = c.nl.m;
    j["alpha_log"] = c.nl.alpha_log;
    j["g_sup"] = c.nl.g_sup;
    j["d"] = c.d;
    j["nx"] = c.nx;
    j["alpha"] = c.alpha;
    j["lambda"] = c.lambda;
    j["sigma"] = c.sigma;
    j["R"] = c.R;
    j["ensemble"] = c.ensemble;
    j["base_seed"] = c.base_seed;
    j["dump_fields"] = c.dump_fields;
    j["noise"] = {{"kind", c.noise.name()}, {"lambda", c.noise.lambda}};
    j["boundary"] = {{"family", to_string(c.boundary)}, {"magnitudes", c.magnitudes}};
    j["ode"] = {{"x0", c.ode.x0}, {"n_steps", c.ode.n_steps}, {"paths", c.ode.paths}, {"brownian", c.ode.brownian}};
    j["tails"] = {{"quantile", c.tails.quantile}, {"samples_file", c.tails.samples_file}};
    j["invariant"] = {{"nx", c.invariant.nx},           {"samples", c.invariant.samples},
                      {"burn_in", c.invariant.burn_in}, {"thin", c.invariant.thin},
                      {"weighted", c.invariant.weighted}, {"spde_realizations", c.invariant.spde_realizations}};
    j["schauder"] = {{"scales", c.schauder.scales}, {"nx", c.schauder.nx}};
    j["commutator"] = {{"fields", c.commutator.fields},
                       {"nx", c.commutator.nx},
                       {"modes", c.commutator.modes},
                       {"scales", c.commutator.scales}};
    j["interp"] = {{"fields", c.interp.fields}, {"nx", c.interp.nx}};
    j["noise_norm"] = {{"realizations", c.noise_norm.realizations},
                       {"nx_variance", c.noise_norm.nx_variance},
                       {"nx_dense", c.noise_norm.nx_dense},
                       {"dense_count", c.noise_norm.dense_count},
                       {"dense_realizations", c.noise_norm.dense_realizations}};
    return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = canonical_config(cfg);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 15];
    }
    return out;
}

}  // namespace cdfi
