#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdfi/experiments.hpp"

namespace cdfi {

TailFit estimate_tail_exponent(std::vector<double> samples, double q) {
    if (samples.size() < 1000) throw std::invalid_argument("tail fit needs at least 1000 samples");
    if (!(q > 0.5 && q < 0.999)) throw std::invalid_argument("tail quantile must lie in (0.5, 0.999)");
    for (double v : samples)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("tail samples must be positive and finite");
    std::sort(samples.begin(), samples.end());
    if (samples.front() == samples.back()) throw std::invalid_argument("degenerate samples (all equal)");

    const auto n = static_cast<long>(samples.size());
    const auto first = static_cast<long>(std::ceil(q * static_cast<double>(n)));
    std::vector<double> lx, ly;
    for (long k = first; k < n; ++k) {
        // Hazen position: S(x_(k)) = 1 - (k + 1/2) / n, never 0 at the maximum.
        const double s = 1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        lx.push_back(std::log(samples[static_cast<std::size_t>(k)]));
        ly.push_back(std::log(-std::log(s)));
    }
    if (lx.size() < 10) throw std::invalid_argument("too few samples above the quantile");
    if (lx.front() == lx.back()) throw std::invalid_argument("degenerate samples above the quantile");

    const double beta = fit_slope(lx, ly);
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        mx += lx[k];
        my += ly[k];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    const double intercept = my - beta * mx;
    double ss = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - (intercept + beta * lx[k]);
        ss += r * r;
    }
    TailFit fit;
    fit.beta = beta;
    fit.c = std::exp(intercept);
    fit.x_min = std::exp(lx.front());
    fit.x_max = std::exp(lx.back());
    fit.residual = std::sqrt(ss / static_cast<double>(lx.size()));
    fit.quantile = q;
    fit.n_samples = n;
    fit.n_fit = static_cast<long>(lx.size());
    return fit;
}

std::vector<double> quantiles(std::vector<double> v, const std::vector<double>& qs) {
    std::vector<double> out;
    if (v.empty()) return std::vector<double>(qs.size(), 0.0);
    std::sort(v.begin(), v.end());
    for (double q : qs) {
        // Linear interpolation between order statistics (type 7).
        const double h = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        out.push_back(v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]));
    }
    return out;
}

IntegrabilityReport compare_integrability(double m, double alpha, const TailFit& spde, const TailFit& invariant,
                                          double band_lo, double band_hi, double max_gap) {
    IntegrabilityReport r;
    r.beta_spde = spde.beta;
    r.beta_invariant = invariant.beta;
    r.target = (m + 3.0) / 2.0;
    r.predicted_sup = 1.0 + (m + 1.0) * alpha;
    r.predicted_holder = 2.0 + (m - 1.0) * alpha;
    r.band_lo = band_lo;
    r.band_hi = band_hi;
    r.max_gap = max_gap;
    return r;
}

bool IntegrabilityReport::passed() const {
    auto in_band = [&](double b) { return b >= band_lo && b <= band_hi; };
    return in_band(beta_spde) && in_band(beta_invariant) && std::abs(beta_spde - beta_invariant) < max_gap;
}

}  // namespace cdfi
