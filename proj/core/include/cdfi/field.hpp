#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cdfi/geometry.hpp"

namespace cdfi {

// Real values on the nodes of an index box of a grid. The box may extend past
// [0,1] x [-1,1]^d (noise is synthesized on enlarged boxes); the values are
// meaningful everywhere inside the box.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(const SpaceTimeGrid& grid, const IndexBox& box, double fill = 0.0);

    const SpaceTimeGrid& grid() const { return grid_; }
    const IndexBox& box() const { return box_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::size_t offset(long n, const long* i) const {
        std::size_t off = static_cast<std::size_t>(n - box_.n0);
        for (int k = 0; k < box_.d; ++k)
            off = off * static_cast<std::size_t>(stride_[k]) + static_cast<std::size_t>(i[k] - box_.i0[k]);
        return off;
    }
    double& at(long n, const long* i) { return values_[offset(n, i)]; }
    double at(long n, const long* i) const { return values_[offset(n, i)]; }
    // d = 1 shortcuts
    double& at(long n, long i) { return values_[static_cast<std::size_t>(n - box_.n0) * stride_[0] + (i - box_.i0[0])]; }
    double at(long n, long i) const { return values_[static_cast<std::size_t>(n - box_.n0) * stride_[0] + (i - box_.i0[0])]; }

    // One time slice in storage order.
    std::span<double> row(long n);
    std::span<const double> row(long n) const;

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    // Copy of the values on a sub-box.
    ScalarField restrict_to(const IndexBox& sub) const;

    // Distance (in lattice steps) from the box faces to [0,1] x [-1,1]^d,
    // i.e. how much room there is for past-looking convolution.
    double support_margin() const;

    template <class F>
    static ScalarField from_function(const SpaceTimeGrid& grid, const IndexBox& box, F&& f) {
        ScalarField h(grid, box);
        std::size_t p = 0;
        for_each_node(box, [&](long n, const long* i) { h.values_[p++] = f(grid.point(n, i)); });
        return h;
    }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

private:
    SpaceTimeGrid grid_;
    IndexBox box_;
    std::array<long, kMaxDim> stride_{};
    std::vector<double> values_;
};

ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

}  // namespace cdfi
