#include "cdfi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace cdfi {

namespace {

double bump_raw(double rho2) { return rho2 < 1.0 ? std::exp(-1.0 / (1.0 - rho2)) : 0.0; }

// 1 / integral of exp(-1/(1-rho^2)) over {t in (0,1), rho < 1}; the substitution
// s = 2t - 1 turns the support into the unit ball of R^{d+1} with Jacobian 1/2.
double bump_constant(int d) {
    thread_local double cache[kMaxDim + 1] = {0.0, 0.0, 0.0, 0.0};
    if (cache[d] > 0.0) return cache[d];
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double radial = integrator.integrate(
        [d](double r) { return std::pow(r, d) * bump_raw(r * r); }, 0.0, 1.0);
    const double half = 0.5 * (d + 1);
    const double sphere = 2.0 * std::pow(std::numbers::pi, half) / boost::math::tgamma(half);
    cache[d] = 1.0 / (0.5 * sphere * radial);
    return cache[d];
}

MollifierKernel sample_bump(double T, int d, const SpaceTimeGrid& grid) {
    MollifierKernel k;
    k.T = T;
    k.d = d;
    k.dt = grid.dt;
    k.dx = grid.dx;
    k.shape = KernelShape::bump;
    k.max_lag = static_cast<long>(std::ceil(T * T / grid.dt - 1e-12)) - 1;
    k.radius = static_cast<long>(std::ceil(T / grid.dx - 1e-12)) - 1;
    if (k.max_lag < 1) throw std::invalid_argument("kernel scale below grid resolution");
    const long w = k.width();
    std::size_t spatial = 1;
    for (int j = 0; j < d; ++j) spatial *= static_cast<std::size_t>(w);
    k.weights.assign(static_cast<std::size_t>(k.max_lag) * spatial, 0.0);

    const double c = bump_constant(d);
    const double scale = std::pow(T, -(d + 2)) * k.cell() * grid.dt;
    std::array<long, kMaxDim> b{};
    std::size_t p = 0;
    for (long a = 1; a <= k.max_lag; ++a) {
        const double s = 2.0 * (static_cast<double>(a) * grid.dt) / (T * T) - 1.0;
        for (int j = 0; j < d; ++j) b[j] = -k.radius;
        for (std::size_t q = 0; q < spatial; ++q) {
            double x2 = 0.0;
            for (int j = 0; j < d; ++j) {
                const double y = static_cast<double>(b[j]) * grid.dx / T;
                x2 += y * y;
            }
            k.weights[p++] = c * bump_raw(x2 + s * s) * scale;
            for (int j = d - 1; j >= 0; --j) {
                if (++b[j] <= k.radius) break;
                b[j] = -k.radius;
            }
        }
    }
    return k;
}

MollifierKernel self_convolve(const MollifierKernel& h, double T) {
    MollifierKernel k;
    k.T = T;
    k.d = h.d;
    k.dt = h.dt;
    k.dx = h.dx;
    k.shape = KernelShape::double_bump;
    k.max_lag = 2 * h.max_lag;
    k.radius = 2 * h.radius;
    const int d = h.d;
    const long hw = h.width(), w = k.width();
    std::size_t hs = 1, s = 1;
    for (int j = 0; j < d; ++j) {
        hs *= static_cast<std::size_t>(hw);
        s *= static_cast<std::size_t>(w);
    }
    k.weights.assign(static_cast<std::size_t>(k.max_lag) * s, 0.0);
    // Lags add: (a1 + a2, b1 + b2); index arithmetic on the flattened layout.
    std::vector<std::array<long, kMaxDim>> hb(hs);
    for (std::size_t q = 0; q < hs; ++q) {
        std::size_t r = q;
        for (int j = d - 1; j >= 0; --j) {
            hb[q][j] = static_cast<long>(r % static_cast<std::size_t>(hw)) - h.radius;
            r /= static_cast<std::size_t>(hw);
        }
    }
    for (long a1 = 1; a1 <= h.max_lag; ++a1)
        for (std::size_t q1 = 0; q1 < hs; ++q1) {
            const double w1 = h.weights[static_cast<std::size_t>(a1 - 1) * hs + q1];
            if (w1 == 0.0) continue;
            for (long a2 = 1; a2 <= h.max_lag; ++a2)
                for (std::size_t q2 = 0; q2 < hs; ++q2) {
                    const double w2 = h.weights[static_cast<std::size_t>(a2 - 1) * hs + q2];
                    if (w2 == 0.0) continue;
                    std::size_t off = static_cast<std::size_t>(a1 + a2 - 1);
                    for (int j = 0; j < d; ++j)
                        off = off * static_cast<std::size_t>(w) +
                              static_cast<std::size_t>(hb[q1][j] + hb[q2][j] + k.radius);
                    k.weights[off] += w1 * w2;
                }
        }
    k.mass = h.mass * h.mass;
    return k;
}

}  // namespace

double bump_profile(double t, double x2, int d) {
    if (!(t > 0.0 && t < 1.0)) return 0.0;
    const double s = 2.0 * t - 1.0;
    return bump_constant(d) * bump_raw(x2 + s * s);
}

double MollifierKernel::cell() const { return std::pow(dx, d); }

double MollifierKernel::weight(long a, const long* b) const {
    if (a < 1 || a > max_lag) return 0.0;
    std::size_t off = static_cast<std::size_t>(a - 1);
    for (int j = 0; j < d; ++j) {
        if (b[j] < -radius || b[j] > radius) return 0.0;
        off = off * static_cast<std::size_t>(width()) + static_cast<std::size_t>(b[j] + radius);
    }
    return weights[off];
}

double MollifierKernel::sup_density() const {
    return *std::max_element(weights.begin(), weights.end()) / (dt * cell());
}

MollifierKernel make_kernel(double T, int d, const SpaceTimeGrid& grid, KernelShape shape) {
    if (d != grid.d) throw std::invalid_argument("kernel and grid dimensions differ");
    if (!(T <= 1.0 + 1e-12)) throw std::invalid_argument("kernel scale must not exceed 1");
    if (T < 4.0 * grid.dx * (1.0 - 1e-12)) throw std::invalid_argument("kernel scale below 4 dx");
    MollifierKernel k;
    if (shape == KernelShape::bump) {
        k = sample_bump(T, d, grid);
        k.mass = 0.0;
        for (double v : k.weights) k.mass += v;
    } else {
        MollifierKernel half = sample_bump(0.5 * T, d, grid);
        half.mass = 0.0;
        for (double v : half.weights) half.mass += v;
        for (double& v : half.weights) v /= half.mass;
        k = self_convolve(half, T);
    }
    double total = 0.0;
    for (double v : k.weights) total += v;
    for (double& v : k.weights) v /= total;
    return k;
}

std::vector<double> dyadic_scales(double t_floor) {
    std::vector<double> out;
    for (double T = 1.0; T >= t_floor * (1.0 - 1e-12); T *= 0.5) out.push_back(T);
    return out;
}

std::size_t fft_friendly_size(std::size_t n) {
    for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u, 7u})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

}  // namespace cdfi
