#pragma once

#include <cstdint>
#include <string>

#include "cdfi/field.hpp"

namespace cdfi {

// Binary dump: 32-byte header (magic "CDNF", int32 LE version = 1, d, nx, nt,
// 12 zero bytes) followed by the box values as float64 LE in storage order.
// The box, grid and generation metadata go to a JSON sidecar "<path>.json".
struct FieldMeta {
    std::string spec;  // e.g. noise kind, "u", "commutator"
    std::uint64_t seed = 0;
};

void write_field(const std::string& path, const ScalarField& f, const FieldMeta& meta = {});

struct LoadedField {
    ScalarField field;
    FieldMeta meta;
};

LoadedField read_field(const std::string& path);

}  // namespace cdfi
