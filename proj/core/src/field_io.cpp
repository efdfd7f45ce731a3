#include "cdfi/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cdfi/report.hpp"

namespace cdfi {

namespace {

constexpr char kMagic[4] = {'C', 'D', 'N', 'F'};
constexpr std::int32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

void put_i32(char* p, std::int32_t v) { std::memcpy(p, &v, 4); }
std::int32_t get_i32(const char* p) {
    std::int32_t v;
    std::memcpy(&v, p, 4);
    return v;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f, const FieldMeta& meta) {
    const SpaceTimeGrid& g = f.grid();
    std::array<char, 32> header{};
    std::memcpy(header.data(), kMagic, 4);
    put_i32(header.data() + 4, kVersion);
    put_i32(header.data() + 8, g.d);
    put_i32(header.data() + 12, g.nx);
    put_i32(header.data() + 16, static_cast<std::int32_t>(g.nt));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(header.data(), header.size());
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.values().size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);

    const IndexBox& b = f.box();
    Json side;
    side["format"] = "CDNF";
    side["version"] = kVersion;
    side["grid"] = {{"d", g.d}, {"nx", g.nx}, {"nt", g.nt}, {"dx", g.dx}, {"dt", g.dt}};
    Json i0 = Json::array(), i1 = Json::array();
    for (int k = 0; k < b.d; ++k) {
        i0.push_back(b.i0[k]);
        i1.push_back(b.i1[k]);
    }
    side["box"] = {{"n0", b.n0}, {"n1", b.n1}, {"i0", i0}, {"i1", i1}};
    side["spec"] = meta.spec;
    side["seed"] = meta.seed;
    side["values"] = f.values().size();
    write_json(path + ".json", side);
}

LoadedField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::array<char, 32> header{};
    in.read(header.data(), header.size());
    if (!in || std::memcmp(header.data(), kMagic, 4) != 0) throw std::runtime_error(path + ": not a CDNF field dump");
    if (get_i32(header.data() + 4) != kVersion) throw std::runtime_error(path + ": unsupported CDNF version");
    const int d = get_i32(header.data() + 8), nx = get_i32(header.data() + 12), nt = get_i32(header.data() + 16);

    std::ifstream sin(path + ".json");
    if (!sin) throw std::runtime_error("missing sidecar " + path + ".json");
    const Json side = Json::parse(sin);
    const SpaceTimeGrid grid = SpaceTimeGrid::make(d, nx);
    if (grid.nt != nt) throw std::runtime_error(path + ": header nt disagrees with the grid");
    IndexBox b;
    b.d = d;
    b.n0 = side.at("box").at("n0").get<long>();
    b.n1 = side.at("box").at("n1").get<long>();
    for (int k = 0; k < d; ++k) {
        b.i0[k] = side.at("box").at("i0").at(k).get<long>();
        b.i1[k] = side.at("box").at("i1").at(k).get<long>();
    }
    LoadedField out{ScalarField(grid, b), {side.at("spec").get<std::string>(), side.at("seed").get<std::uint64_t>()}};
    auto& v = out.field.values();
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated data");
    return out;
}

}  // namespace cdfi
