#include "cdfi/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdfi {

ScalarField::ScalarField(const SpaceTimeGrid& grid, const IndexBox& box, double fill)
    : grid_(grid), box_(box) {
    if (box.d != grid.d) throw std::invalid_argument("box and grid dimensions differ");
    if (box.empty()) throw std::invalid_argument("field box is empty");
    for (int k = 0; k < box.d; ++k) stride_[k] = box.nx(k);
    values_.assign(box.size(), fill);
}

std::span<double> ScalarField::row(long n) {
    const std::size_t s = box_.spatial_size();
    return {values_.data() + static_cast<std::size_t>(n - box_.n0) * s, s};
}

std::span<const double> ScalarField::row(long n) const {
    const std::size_t s = box_.spatial_size();
    return {values_.data() + static_cast<std::size_t>(n - box_.n0) * s, s};
}

ScalarField ScalarField::restrict_to(const IndexBox& sub) const {
    if (!box_.contains(sub)) throw std::out_of_range("restriction box not inside field box");
    ScalarField out(grid_, sub);
    std::size_t p = 0;
    if (sub.d == 1) {
        const long w = sub.nx(0);
        for (long n = sub.n0; n <= sub.n1; ++n) {
            const double* src = &values_[offset(n, &sub.i0[0])];
            std::copy(src, src + w, out.values_.data() + p);
            p += static_cast<std::size_t>(w);
        }
        return out;
    }
    for_each_node(sub, [&](long n, const long* i) { out.values_[p++] = at(n, i); });
    return out;
}

double ScalarField::support_margin() const {
    double m = static_cast<double>(0 - box_.n0) * grid_.dt;
    m = m > 0 ? std::sqrt(m) : -std::sqrt(-m);
    for (int k = 0; k < box_.d; ++k) {
        m = std::min(m, static_cast<double>(0 - box_.i0[k]) * grid_.dx);
        m = std::min(m, static_cast<double>(box_.i1[k] - (grid_.nx - 1)) * grid_.dx);
    }
    return m;
}

namespace {

void require_same(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid()) || !(a.box() == b.box()))
        throw std::invalid_argument("fields live on different grids or boxes");
}

}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same(*this, o);
    for (std::size_t p = 0; p < values_.size(); ++p) values_[p] += o.values_[p];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same(*this, o);
    for (std::size_t p = 0; p < values_.size(); ++p) values_[p] -= o.values_[p];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

}  // namespace cdfi
