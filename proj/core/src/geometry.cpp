#include "cdfi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdfi {

namespace {

void require_same_dim(const Point& a, const Point& b) {
    if (a.x.size() != b.x.size())
        throw std::invalid_argument("point dimension mismatch");
}

}  // namespace

double parabolic_distance(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double s = 0.0;
    for (std::size_t k = 0; k < a.x.size(); ++k) {
        const double dx = a.x[k] - b.x[k];
        s += dx * dx;
    }
    return std::max(std::sqrt(s), std::sqrt(std::abs(a.t - b.t)));
}

bool ParabolicBall::contains(const Point& z) const {
    return parabolic_distance(z, center) < radius && z.t < center.t;
}

bool ball_membership(const ParabolicBall& ball, const Point& z) { return ball.contains(z); }

Cylinder::Cylinder(double r, int dim) : R(r), d(dim) {
    if (!(r >= 0.0 && r < 0.5)) throw std::invalid_argument("cylinder offset R must lie in [0, 1/2)");
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
}

bool Cylinder::contains(const Point& z) const {
    if (z.dim() != d) throw std::invalid_argument("point dimension mismatch");
    if (!(z.t > R * R && z.t < 1.0)) return false;
    for (double xi : z.x)
        if (!(std::abs(xi) < 1.0 - R)) return false;
    return true;
}

bool IndexBox::empty() const {
    if (n1 < n0) return true;
    for (int k = 0; k < d; ++k)
        if (i1[k] < i0[k]) return true;
    return false;
}

std::size_t IndexBox::spatial_size() const {
    if (empty()) return 0;
    std::size_t s = 1;
    for (int k = 0; k < d; ++k) s *= static_cast<std::size_t>(nx(k));
    return s;
}

std::size_t IndexBox::size() const {
    return empty() ? 0 : spatial_size() * static_cast<std::size_t>(nt());
}

bool IndexBox::contains(long n, const long* i) const {
    if (n < n0 || n > n1) return false;
    for (int k = 0; k < d; ++k)
        if (i[k] < i0[k] || i[k] > i1[k]) return false;
    return true;
}

bool IndexBox::contains(const IndexBox& o) const {
    if (o.empty()) return true;
    if (o.d != d || o.n0 < n0 || o.n1 > n1) return false;
    for (int k = 0; k < d; ++k)
        if (o.i0[k] < i0[k] || o.i1[k] > i1[k]) return false;
    return true;
}

IndexBox IndexBox::shrink(long time_lag, long radius) const {
    IndexBox b = *this;
    b.n0 += time_lag;
    for (int k = 0; k < d; ++k) {
        b.i0[k] += radius;
        b.i1[k] -= radius;
    }
    return b;
}

IndexBox IndexBox::grow(long time_lag, long radius) const { return shrink(-time_lag, -radius); }

IndexBox IndexBox::intersect(const IndexBox& o) const {
    IndexBox b = *this;
    b.n0 = std::max(n0, o.n0);
    b.n1 = std::min(n1, o.n1);
    for (int k = 0; k < d; ++k) {
        b.i0[k] = std::max(i0[k], o.i0[k]);
        b.i1[k] = std::min(i1[k], o.i1[k]);
    }
    return b;
}

SpaceTimeGrid SpaceTimeGrid::make(int d, int nx) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (nx < 5 || (nx - 1) % 2 != 0) throw std::invalid_argument("nx must be odd and at least 5");
    SpaceTimeGrid g;
    g.d = d;
    g.nx = nx;
    g.dx = 2.0 / static_cast<double>(nx - 1);
    g.dt = g.dx * g.dx;
    const double steps = 1.0 / g.dt;
    g.nt = std::lround(steps);
    if (std::abs(steps - static_cast<double>(g.nt)) > 1e-9 * steps)
        throw std::invalid_argument("nx must make 1/dx^2 an integer");
    return g;
}

Point SpaceTimeGrid::point(long n, const long* i) const {
    Point p;
    p.t = t(n);
    p.x.resize(d);
    for (int k = 0; k < d; ++k) p.x[k] = x(i[k]);
    return p;
}

IndexBox SpaceTimeGrid::full_box() const {
    IndexBox b;
    b.d = d;
    b.n0 = 0;
    b.n1 = nt;
    for (int k = 0; k < d; ++k) {
        b.i0[k] = 0;
        b.i1[k] = nx - 1;
    }
    return b;
}

IndexBox SpaceTimeGrid::interior_box() const { return cylinder_region(0.0, *this); }

IndexBox SpaceTimeGrid::dilate(const IndexBox& region, double r) const {
    const long lag = static_cast<long>(std::ceil(r * r / dt - 1e-9));
    const long rad = static_cast<long>(std::ceil(r / dx - 1e-9));
    return region.grow(lag, rad);
}

IndexBox cylinder_region(double R, const SpaceTimeGrid& grid) {
    // R = 1/2 still leaves (1/4, 1) x (-1/2, 1/2)^d, so the closed range is accepted.
    if (!(R >= 0.0 && R <= 0.5)) throw std::invalid_argument("cylinder offset R must lie in [0, 1/2]");
    IndexBox b;
    b.d = grid.d;
    // t > R^2 and t <= 1, strict faces taken with half-cell slack.
    b.n0 = static_cast<long>(std::floor((R * R + 0.5 * grid.dt) / grid.dt)) + 1;
    b.n1 = grid.nt;
    // |x| < 1 - R - dx/2
    const double lim = 1.0 - R - 0.5 * grid.dx;
    for (int k = 0; k < grid.d; ++k) {
        long lo = static_cast<long>(std::ceil((1.0 - lim) / grid.dx));
        if (grid.x(lo) <= -lim) ++lo;
        b.i0[k] = lo;
        b.i1[k] = (grid.nx - 1) - lo;
    }
    return b;
}

}  // namespace cdfi
