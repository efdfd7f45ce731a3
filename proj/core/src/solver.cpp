#include "cdfi/solver.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace cdfi {

BoundaryFamily parse_boundary_family(const std::string& s) {
    if (s == "constant") return BoundaryFamily::constant;
    if (s == "oscillating") return BoundaryFamily::oscillating;
    if (s == "random") return BoundaryFamily::random;
    throw std::invalid_argument("unknown boundary family '" + s + "'");
}

std::string to_string(BoundaryFamily f) {
    switch (f) {
        case BoundaryFamily::constant: return "constant";
        case BoundaryFamily::oscillating: return "oscillating";
        case BoundaryFamily::random: return "random";
    }
    return "unknown";
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

}  // namespace

double BoundaryData::value(double t, std::span<const double> x) const {
    switch (family) {
        case BoundaryFamily::constant: return magnitude;
        case BoundaryFamily::oscillating: {
            double phase = 8.0 * std::numbers::pi * t;
            for (double xi : x) phase += 3.0 * xi;
            return magnitude * std::cos(phase);
        }
        case BoundaryFamily::random: {
            std::uint64_t h = mix64(seed ^ bits(t));
            for (double xi : x) h = mix64(h ^ bits(xi));
            return magnitude * (2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0);
        }
    }
    return 0.0;
}

double reaction_flow(const Nonlinearity& nl, double x0, double tau) {
    if (tau < 0.0) throw std::invalid_argument("flow duration must be nonnegative");
    if (tau == 0.0 || x0 == 0.0) return x0;
    const double s = x0 < 0 ? -1.0 : 1.0;
    const double a = std::abs(x0);
    switch (nl.kind()) {
        case NonlinearityKind::polynomial:
        case NonlinearityKind::polynomial_plus_bounded: {
            const double m = nl.m();
            if (m == 3.0 && a < 1e100) return x0 / std::sqrt(1.0 + 2.0 * tau * a * a);
            return s * std::pow(std::pow(a, 1.0 - m) + (m - 1.0) * tau, -1.0 / (m - 1.0));
        }
        case NonlinearityKind::sinh:
            return s * 2.0 * std::atanh(std::tanh(0.5 * a) * std::exp(-tau));
        case NonlinearityKind::log_type:
        case NonlinearityKind::log_plain: {
            // Integrate y = log|x|: dy/dtau = -f(e^y) / e^y.
            namespace ode = boost::numeric::odeint;
            double y = std::log(a);
            auto rhs = [&nl](const double& yy, double& dy, double) {
                const double u = std::exp(yy);
                dy = -nl.f(u) / u;
            };
            auto stepper = ode::make_controlled(1e-12, 1e-10, ode::runge_kutta_dopri5<double>());
            ode::integrate_adaptive(stepper, rhs, y, 0.0, tau, tau * 1e-3);
            return s * std::exp(y);
        }
    }
    return x0;
}

Trajectory solve_ode(const Nonlinearity& nl, double x0, const std::vector<double>& w, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be positive");
    if (static_cast<int>(w.size()) != n_steps + 1) throw std::invalid_argument("path must hold n_steps + 1 samples");
    Trajectory tr;
    tr.times.resize(static_cast<std::size_t>(n_steps) + 1);
    tr.values.resize(static_cast<std::size_t>(n_steps) + 1);
    const double h = 1.0 / n_steps;
    double x = x0;
    tr.times[0] = 0.0;
    tr.values[0] = x;
    for (int k = 0; k < n_steps; ++k) {
        x = reaction_flow(nl, x, h) + (w[k + 1] - w[k]);
        tr.times[k + 1] = (k + 1) * h;
        tr.values[k + 1] = x;
    }
    return tr;
}

std::vector<double> brownian_path(int n_steps, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x4250u};
    std::mt19937_64 eng(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(1.0 / n_steps));
    std::vector<double> w(static_cast<std::size_t>(n_steps) + 1, 0.0);
    for (int k = 0; k < n_steps; ++k) w[k + 1] = w[k] + normal(eng);
    return w;
}

namespace {

void require_finite(double v, long n, std::size_t p) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite value at time step " << n << ", node " << p;
        throw std::runtime_error(os.str());
    }
}

// Nodes of one time slice with their coordinates and interior flag.
struct Slice {
    int d = 1;
    long nx = 0;
    std::size_t size = 0;
    std::vector<double> coords;  // size * d
    std::vector<char> interior;
    std::vector<std::array<long, kMaxDim>> index;

    explicit Slice(const SpaceTimeGrid& g) : d(g.d), nx(g.nx) {
        size = 1;
        for (int k = 0; k < d; ++k) size *= static_cast<std::size_t>(nx);
        coords.resize(size * d);
        interior.resize(size);
        index.resize(size);
        for (std::size_t p = 0; p < size; ++p) {
            std::size_t r = p;
            bool in = true;
            for (int k = d - 1; k >= 0; --k) {
                const long i = static_cast<long>(r % static_cast<std::size_t>(nx));
                r /= static_cast<std::size_t>(nx);
                index[p][k] = i;
                coords[p * d + k] = g.x(i);
                in = in && i > 0 && i < nx - 1;
            }
            interior[p] = in;
        }
    }
    std::span<const double> x(std::size_t p) const { return {coords.data() + p * d, static_cast<std::size_t>(d)}; }
};

// Explicit heat sub-step with r = dt_sub / dx^2 = 1 / (4 d): every weight is
// nonnegative (maximum principle), the checkerboard mode is damped, and data
// travels one node per sub-step. Boundary entries hold the new data.
class ExplicitHeat {
public:
    explicit ExplicitHeat(const Slice& s) : slice_(s), tmp_(s.size) {
        std::size_t stride = 1;
        for (int k = s.d - 1; k >= 0; --k) {
            strides_[k] = stride;
            stride *= static_cast<std::size_t>(s.nx);
        }
    }

    int substeps() const { return 4 * slice_.d; }

    void substep(std::vector<double>& u) {
        const double r = 1.0 / (4.0 * slice_.d);
        for (std::size_t p = 0; p < slice_.size; ++p) {
            if (!slice_.interior[p]) {
                tmp_[p] = u[p];
                continue;
            }
            double lap = 0.0;
            for (int k = 0; k < slice_.d; ++k) lap += u[p + strides_[k]] + u[p - strides_[k]] - 2.0 * u[p];
            tmp_[p] = u[p] + r * lap;
        }
        u.swap(tmp_);
    }

private:
    const Slice& slice_;
    std::vector<double> tmp_;
    std::array<std::size_t, kMaxDim> strides_{};
};

void run_scheme(const Nonlinearity* nl, const ScalarField* zeta, const BoundaryData& bc, const SpaceTimeGrid& grid,
                const SolveOptions& opt, const RowObserver& observe) {
    const Slice s(grid);
    if (zeta) {
        IndexBox need = grid.interior_box();
        if (!zeta->box().contains(need)) throw std::invalid_argument("noise does not cover the interior nodes");
    }
    std::vector<double> u(s.size);
    for (std::size_t p = 0; p < s.size; ++p) u[p] = bc.value(0.0, s.x(p));
    observe(0, u);

    // Sub-steps of 1 / (4 d) rather than the stability limit 1 / (2 d): at the
    // limit the checkerboard is undamped and white noise piles up in it. An
    // implicit step damps it too but leaks lateral data of any size into the
    // interior within one step, which breaks uniformity in the data.
    ExplicitHeat heat(s);
    const int half_diffusion = heat.substeps() / 2;

    const double half = 0.5 * grid.dt;
    auto react = [&](std::vector<double>& v) {
        if (!nl) return;
        for (std::size_t p = 0; p < s.size; ++p)
            if (s.interior[p]) v[p] = reaction_flow(*nl, v[p], half);
    };
    for (long n = 0; n < grid.nt; ++n) {
        const double t1 = grid.t(n + 1);
        react(u);
        for (std::size_t p = 0; p < s.size; ++p)
            if (!s.interior[p]) u[p] = bc.value(t1, s.x(p));
        // Forcing and noise enter between the two halves of the diffusion,
        // sigma at the state before the increment.
        if (opt.diffusion)
            for (int k = 0; k < half_diffusion; ++k) heat.substep(u);
        const double tm = grid.t(n) + half;
        for (std::size_t p = 0; p < s.size; ++p) {
            if (!s.interior[p]) continue;
            double inc = 0.0;
            if (opt.g) inc += opt.g(tm, s.x(p)) * grid.dt;
            if (zeta) {
                double sig = 1.0;
                if (opt.sigma) sig = std::clamp(opt.sigma(grid.t(n), s.x(p), u[p]), -1.0, 1.0);
                inc += sig * zeta->at(n + 1, s.index[p].data()) * grid.dt;
            }
            u[p] += inc;
        }
        if (opt.diffusion)
            for (int k = 0; k < half_diffusion; ++k) heat.substep(u);
        react(u);
        for (std::size_t p = 0; p < s.size; ++p) require_finite(u[p], n + 1, p);
        observe(n + 1, u);
    }
}

}  // namespace

void solve_rd_pde(const Nonlinearity& nl, const ScalarField* zeta, const BoundaryData& bc, const SpaceTimeGrid& grid,
                  const SolveOptions& opt, const RowObserver& observe) {
    run_scheme(&nl, zeta, bc, grid, opt, observe);
}

ScalarField solve_rd_pde(const Nonlinearity& nl, const ScalarField* zeta, const BoundaryData& bc,
                         const SpaceTimeGrid& grid, const SolveOptions& opt) {
    ScalarField u(grid, grid.full_box());
    run_scheme(&nl, zeta, bc, grid, opt, [&](long n, std::span<const double> row) {
        std::copy(row.begin(), row.end(), u.row(n).begin());
    });
    return u;
}

ScalarField solve_linear_heat(const ScalarField* zeta, const SpaceTimeGrid& grid) {
    ScalarField w(grid, grid.full_box());
    run_scheme(nullptr, zeta, BoundaryData::constant(0.0), grid, {}, [&](long n, std::span<const double> row) {
        std::copy(row.begin(), row.end(), w.row(n).begin());
    });
    return w;
}

ScalarField remainder(const ScalarField& u, const ScalarField& w) { return u - w; }

}  // namespace cdfi
