#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace cdfi {

inline constexpr int kMaxDim = 3;

// z = (t, x) with x in R^d.
struct Point {
    double t = 0.0;
    std::vector<double> x;

    int dim() const { return static_cast<int>(x.size()); }
};

// max(|x1 - x2|, sqrt|t1 - t2|)
double parabolic_distance(const Point& a, const Point& b);

// Metric ball around center that only looks into the past.
struct ParabolicBall {
    Point center;
    double radius = 0.0;

    bool contains(const Point& z) const;
};

bool ball_membership(const ParabolicBall& ball, const Point& z);

// P_R = (R^2, 1) x (-(1-R), 1-R)^d
struct Cylinder {
    double R = 0.0;
    int d = 1;

    Cylinder(double r, int dim);
    bool contains(const Point& z) const;
};

// Inclusive index box on the infinite lattice t = n*dt, x_k = -1 + i_k*dx.
struct IndexBox {
    int d = 1;
    long n0 = 0, n1 = -1;
    std::array<long, kMaxDim> i0{}, i1{};

    bool empty() const;
    long nt() const { return n1 - n0 + 1; }
    long nx(int k) const { return i1[k] - i0[k] + 1; }
    std::size_t spatial_size() const;
    std::size_t size() const;
    bool contains(long n, const long* i) const;
    bool contains(const IndexBox& other) const;
    // Shrink by a time lag (from below only) and a spatial radius on each side.
    IndexBox shrink(long time_lag, long radius) const;
    IndexBox grow(long time_lag, long radius) const;
    IndexBox intersect(const IndexBox& other) const;
    bool operator==(const IndexBox&) const = default;
};

// Uniform lattice over [0,1] x [-1,1]^d with dt = dx^2.
struct SpaceTimeGrid {
    int d = 1;
    int nx = 257;
    double dx = 1.0 / 128.0;
    double dt = 1.0 / 16384.0;
    long nt = 16384;  // time steps, t_nt = 1

    static SpaceTimeGrid make(int d, int nx);

    double t(long n) const { return static_cast<double>(n) * dt; }
    double x(long i) const { return -1.0 + static_cast<double>(i) * dx; }
    Point point(long n, const long* i) const;

    // All nodes of [0,1] x [-1,1]^d.
    IndexBox full_box() const;
    // Nodes with t > 0 and x in the open cube.
    IndexBox interior_box() const;
    // Smallest box containing region + B(0, r) for a spatial radius r.
    IndexBox dilate(const IndexBox& region, double r) const;

    bool operator==(const SpaceTimeGrid& o) const {
        return d == o.d && nx == o.nx && nt == o.nt && dx == o.dx && dt == o.dt;
    }
};

// Nodes of P_R, open faces resolved with a half-cell tolerance. The final
// time slice t = 1 is kept.
IndexBox cylinder_region(double R, const SpaceTimeGrid& grid);

// Iterate over the nodes of a box in storage order (time major, last axis fastest).
template <class F>
void for_each_node(const IndexBox& box, F&& f) {
    if (box.empty()) return;
    std::array<long, kMaxDim> i{};
    for (long n = box.n0; n <= box.n1; ++n) {
        for (int k = 0; k < box.d; ++k) i[k] = box.i0[k];
        while (true) {
            f(n, i.data());
            int k = box.d - 1;
            while (k >= 0 && i[k] == box.i1[k]) {
                i[k] = box.i0[k];
                --k;
            }
            if (k < 0) break;
            ++i[k];
        }
    }
}

}  // namespace cdfi
