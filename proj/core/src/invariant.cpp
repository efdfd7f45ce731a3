#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cdfi/experiments.hpp"
#include "fftw_util.hpp"

namespace cdfi {

namespace {

// Draws from N(0, (dx/2) L^{-1}), L = tridiag(-1, 2, -1) on the n interior
// nodes, through the sine eigenbasis of L.
class BridgeSampler {
public:
    BridgeSampler(int n, double dx) : n_(n), in_(detail::fftw_buffer<double>(n)), out_(detail::fftw_buffer<double>(n)) {
        const double h = std::numbers::pi / static_cast<double>(n + 1);
        const double norm = std::sqrt(2.0 / static_cast<double>(n + 1)) / 2.0;
        for (int k = 1; k <= n; ++k) {
            const double lam = 2.0 - 2.0 * std::cos(h * k);
            amp_.push_back(norm * std::sqrt(dx / (2.0 * lam)));
        }
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_r2r_1d(n, in_.get(), out_.get(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    ~BridgeSampler() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    BridgeSampler(const BridgeSampler&) = delete;
    BridgeSampler& operator=(const BridgeSampler&) = delete;

    template <class Rng>
    void draw(Rng& rng, std::vector<double>& xi) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int k = 0; k < n_; ++k) in_[k] = amp_[static_cast<std::size_t>(k)] * normal(rng);
        fftw_execute(plan_);
        xi.assign(out_.get(), out_.get() + n_);
    }

private:
    int n_;
    std::vector<double> amp_;
    detail::FftwBuffer<double> in_, out_;
    fftw_plan plan_ = nullptr;
};

double power_integral(const std::vector<double>& u, double m, double dx) {
    double s = 0.0;
    for (double v : u) s += std::pow(std::abs(v), m + 1.0);
    return s * dx;
}

double sup_abs(const std::vector<double>& u) {
    double s = 0.0;
    for (double v : u) s = std::max(s, std::abs(v));
    return s;
}

// Windowed integrated autocorrelation time (Sokal, window c = 5).
double integrated_autocorrelation(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 4) return 1.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    c0 /= static_cast<double>(n);
    if (c0 == 0.0) return 1.0;
    double tau = 1.0;
    for (std::size_t lag = 1; lag < n / 2; ++lag) {
        double c = 0.0;
        for (std::size_t k = 0; k + lag < n; ++k) c += (x[k] - mean) * (x[k + lag] - mean);
        c /= static_cast<double>(n) * c0;
        tau += 2.0 * c;
        if (static_cast<double>(lag) >= 5.0 * tau) break;
    }
    return std::max(tau, 1.0);
}

}  // namespace

InvariantSamples sample_invariant_measure(double m, int nx, std::uint64_t seed, const InvariantOptions& opt) {
    if (!(m > 1.0)) throw std::invalid_argument("m must exceed 1");
    if (nx < 3) throw std::invalid_argument("invariant sampler needs nx >= 3");
    if (opt.samples < 1 || opt.thin < 1 || opt.burn_in < 0) throw std::invalid_argument("invalid chain lengths");
    if (static_cast<long>(opt.samples) * opt.thin < 10000)
        throw std::invalid_argument("chain needs at least 1e4 steps after burn-in");

    const int n = nx - 2;
    const double dx = 2.0 / static_cast<double>(nx - 1);
    BridgeSampler ref(n, dx);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Potential of the reweighting: 2 int |u|^{m+1} / (m+1) against a reference
    // Gaussian of the scheme u_t = Laplacian u + xi.
    auto potential = [&](const std::vector<double>& u) {
        return opt.weighted ? 2.0 * power_integral(u, m, dx) / (m + 1.0) : 0.0;
    };

    std::vector<double> u, xi, prop(static_cast<std::size_t>(n));
    ref.draw(rng, u);
    double phi = potential(u);
    double log_step = std::log(0.5);

    auto step = [&](double beta) {
        ref.draw(rng, xi);
        const double keep = std::sqrt(1.0 - beta * beta);
        for (int i = 0; i < n; ++i) prop[i] = keep * u[i] + beta * xi[i];
        const double phi_p = potential(prop);
        const double log_a = phi - phi_p;
        if (log_a >= 0.0 || unif(rng) < std::exp(log_a)) {
            u.swap(prop);
            phi = phi_p;
            return true;
        }
        return false;
    };

    for (int k = 0; k < opt.burn_in; ++k) {
        const double beta = std::exp(log_step);
        const bool acc = step(beta);
        // Robbins-Monro adaptation towards the target acceptance rate.
        log_step += ((acc ? 1.0 : 0.0) - opt.target_acceptance) / std::pow(1.0 + k, 0.6);
        log_step = std::clamp(log_step, std::log(1e-4), 0.0);
    }

    InvariantSamples out;
    out.step = std::exp(log_step);
    long accepted = 0;
    std::vector<double> sups;
    double pot_sum = 0.0;
    for (int s = 0; s < opt.samples; ++s) {
        for (int k = 0; k < opt.thin; ++k) accepted += step(out.step) ? 1 : 0;
        std::vector<double> field(static_cast<std::size_t>(nx), 0.0);
        std::copy(u.begin(), u.end(), field.begin() + 1);
        sups.push_back(sup_abs(u));
        pot_sum += power_integral(u, m, dx);
        out.fields.push_back(std::move(field));
    }
    out.acceptance = static_cast<double>(accepted) / (static_cast<double>(opt.samples) * opt.thin);
    out.integrated_autocorrelation = integrated_autocorrelation(sups);
    out.mean_potential = pot_sum / opt.samples;
    out.acceptance_ok = !opt.weighted || (out.acceptance >= 0.1 && out.acceptance <= 0.9);
    return out;
}

}  // namespace cdfi
