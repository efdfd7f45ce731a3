#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cdfi/experiments.hpp"
#include "cdfi/norms.hpp"

namespace cdfi {

Nonlinearity NonlinearitySpec::build() const {
    if (kind == "polynomial") return Nonlinearity::polynomial(m);
    if (kind == "polynomial_plus_bounded") return Nonlinearity::polynomial_plus_bounded(m, g_sup);
    if (kind == "sinh") return Nonlinearity::sinh_type();
    if (kind == "log_type") return Nonlinearity::log_type(alpha_log);
    if (kind == "log_plain") return Nonlinearity::log_plain(alpha_log);
    throw std::invalid_argument("unknown nonlinearity kind '" + kind + "'");
}

void ExperimentConfig::validate() const {
    std::vector<std::string> err;
    const bool known = nl.kind == "polynomial" || nl.kind == "polynomial_plus_bounded" || nl.kind == "sinh" ||
                       nl.kind == "log_type" || nl.kind == "log_plain";
    if (!known) err.push_back("unknown nonlinearity kind '" + nl.kind + "'");
    if (!(nl.m > 1.0)) err.push_back("m must exceed 1");
    if (!(nl.alpha_log > 0.0)) err.push_back("alpha_log must be positive");
    if (!(nl.g_sup >= 0.0)) err.push_back("g_sup must be nonnegative");
    if (d < 1 || d > 3) err.push_back("d must be 1, 2 or 3");
    if (nx < 5 || nx % 2 == 0) err.push_back("nx must be odd and at least 5");
    if (d >= 1 && d <= 3) {
        try {
            noise.validate(d);
            if (noise.kind != NoiseKind::none && !(alpha < noise.regularity_ceiling(d)))
                err.push_back("alpha must lie below the noise regularity ceiling " +
                              std::to_string(noise.regularity_ceiling(d)));
        } catch (const std::exception& e) {
            err.push_back(e.what());
        }
    }
    if (!(alpha > 0.0 && alpha < 1.0)) err.push_back("alpha must lie in (0, 1)");
    if (!(std::abs(sigma) <= 1.0)) err.push_back("sigma must satisfy |sigma| <= 1");
    if (!(lambda > 0.0)) err.push_back("lambda must be positive");
    if (R.empty()) err.push_back("R list must be nonempty");
    for (double r : R)
        if (!(r > 0.0 && r < 0.5)) err.push_back("R values must lie in (0, 1/2)");
    if (magnitudes.empty()) err.push_back("magnitudes must be nonempty");
    for (double v : magnitudes)
        if (!(v >= 0.0) || !std::isfinite(v)) err.push_back("magnitudes must be finite and nonnegative");
    if (ensemble < 1) err.push_back("ensemble must be at least 1");
    if (ode.x0.empty()) err.push_back("ode.x0 must be nonempty");
    if (ode.n_steps < 1) err.push_back("ode.n_steps must be positive");
    if (ode.paths < 1) err.push_back("ode.paths must be positive");
    if (!(tails.quantile > 0.5 && tails.quantile < 0.999)) err.push_back("tails.quantile must lie in (0.5, 0.999)");
    if (invariant.nx < 3) err.push_back("invariant.nx must be at least 3");
    if (invariant.samples < 1 || invariant.thin < 1 || invariant.burn_in < 0)
        err.push_back("invariant chain lengths must be positive");
    if (invariant.spde_realizations < 1) err.push_back("invariant.spde_realizations must be positive");
    if (schauder.scales.empty() || schauder.nx.empty()) err.push_back("schauder scales and nx must be nonempty");
    for (double s : schauder.scales)
        if (!(s > 0.0 && s <= 1.0)) err.push_back("schauder scales must lie in (0, 1]");
    if (commutator.fields < 1 || commutator.modes < 1) err.push_back("commutator fields and modes must be positive");
    if (interp.fields < 1 || interp.nx < 5) err.push_back("interp fields must be positive and nx at least 5");
    if (noise_norm.realizations < 1 || noise_norm.dense_realizations < 1 || noise_norm.dense_count < 2)
        err.push_back("noise_norm counts must be positive");
    if (err.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : err) os << "\n  - " << e;
    throw std::invalid_argument(os.str());
}

namespace {

// Offsets, within a full spatial row, of the nodes in a region's spatial window.
std::vector<std::size_t> row_offsets(const IndexBox& region, const SpaceTimeGrid& grid) {
    std::vector<std::size_t> out;
    const long nx = grid.nx;
    const int d = grid.d;
    std::array<long, kMaxDim> i{};
    for (int k = 0; k < d; ++k) i[k] = region.i0[k];
    if (region.empty()) return out;
    while (true) {
        std::size_t off = 0;
        for (int k = 0; k < d; ++k) off = off * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i[k]);
        out.push_back(off);
        int k = d - 1;
        while (k >= 0 && ++i[k] > region.i1[k]) {
            i[k] = region.i0[k];
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

}  // namespace

Forcing smooth_forcing(double g_sup) {
    if (g_sup == 0.0) return {};
    return [g_sup](double t, std::span<const double> x) {
        double s = 5.0 * t;
        for (double v : x) s += 3.0 * v;
        return g_sup * std::cos(s);
    };
}

ComingDownSummary run_coming_down(const ExperimentConfig& cfg) {
    cfg.validate();
    const SpaceTimeGrid grid = cfg.grid();
    const Nonlinearity nl = cfg.nl.build();
    const IndexBox p0 = cylinder_region(0.0, grid);
    const IndexBox nbox = noise_box(grid);
    std::vector<IndexBox> regions;
    std::vector<std::vector<std::size_t>> offsets;
    for (double r : cfg.R) {
        regions.push_back(cylinder_region(r, grid));
        offsets.push_back(row_offsets(regions.back(), grid));
    }
    const NegNormEvaluator eval(grid);
    SolveOptions opt;
    opt.g = smooth_forcing(cfg.nl.g_sup);
    if (cfg.sigma != 1.0) opt.sigma = [s = cfg.sigma](double, std::span<const double>, double) { return s; };

    const std::size_t nm = cfg.magnitudes.size(), nr = cfg.R.size();
    std::vector<std::vector<BoundReport>> per_seed(static_cast<std::size_t>(cfg.ensemble));
    std::vector<std::string> failures(static_cast<std::size_t>(cfg.ensemble));

#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < cfg.ensemble; ++k) {
        try {
            const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
            double zeta_norm = 0.0, argmax_T = 0.0, clamped = 0.0;
            std::optional<NoiseRealization> z;
            if (cfg.noise.kind != NoiseKind::none) {
                z.emplace(sample_noise(grid, cfg.noise, seed, nbox));
                const NegNormDetail nd = eval.dyadic(z->field, cfg.alpha, p0);
                zeta_norm = std::abs(cfg.sigma) * nd.value;
                argmax_T = nd.argmax_T;
                clamped = z->clamped_mass;
            }
            auto& out = per_seed[static_cast<std::size_t>(k)];
            for (std::size_t im = 0; im < nm; ++im) {
                const BoundaryData bc{cfg.boundary, cfg.magnitudes[im], seed};
                std::vector<double> sup(nr, 0.0);
                solve_rd_pde(nl, z ? &z->field : nullptr, bc, grid, opt, [&](long n, std::span<const double> row) {
                    for (std::size_t ir = 0; ir < nr; ++ir) {
                        if (n < regions[ir].n0 || n > regions[ir].n1) continue;
                        double s = sup[ir];
                        for (std::size_t off : offsets[ir]) s = std::max(s, std::abs(row[off]));
                        sup[ir] = s;
                    }
                });
                for (std::size_t ir = 0; ir < nr; ++ir) {
                    BoundReport r;
                    r.experiment = "coming-down";
                    r.seed = seed;
                    r.magnitude = cfg.magnitudes[im];
                    r.R = cfg.R[ir];
                    r.lhs = sup[ir];
                    r.rhs_terms = pde_bound_terms(cfg.nl.m, cfg.alpha, cfg.R[ir], zeta_norm, cfg.nl.g_sup);
                    r.extra = {{"alpha", cfg.alpha},   {"dx", grid.dx},           {"t_floor", eval.t_floor()},
                               {"zeta_norm", zeta_norm}, {"argmax_T", argmax_T}, {"clamped_mass", clamped}};
                    r.finish();
                    out.push_back(std::move(r));
                }
            }
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(k)] = e.what();
        }
    }
    for (int k = 0; k < cfg.ensemble; ++k)
        if (!failures[static_cast<std::size_t>(k)].empty())
            throw std::runtime_error("coming-down realization " + std::to_string(cfg.base_seed + k) + ": " +
                                     failures[static_cast<std::size_t>(k)]);

    ComingDownSummary s;
    s.magnitudes = cfg.magnitudes;
    s.max_ratio.assign(nm, 0.0);
    std::vector<std::vector<double>> ratios(nm);
    for (auto& v : per_seed)
        for (auto& r : v) {
            const auto im = static_cast<std::size_t>(
                std::find(cfg.magnitudes.begin(), cfg.magnitudes.end(), r.magnitude) - cfg.magnitudes.begin());
            if (!std::isfinite(r.ratio)) s.all_finite = false;
            s.max_ratio[im] = std::max(s.max_ratio[im], r.ratio);
            ratios[im].push_back(r.ratio);
            s.reports.push_back(std::move(r));
        }
    for (auto& v : ratios) s.median_ratio.push_back(quantiles(v, {0.5})[0]);
    std::vector<double> lx, ly;
    for (std::size_t im = 0; im < nm; ++im)
        if (s.magnitudes[im] > 0.0 && s.max_ratio[im] > 0.0) {
            lx.push_back(std::log(s.magnitudes[im]));
            ly.push_back(std::log(s.max_ratio[im]));
        }
    s.log_slope = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;
    return s;
}

std::vector<std::vector<double>> spde_sup_samples(const ExperimentConfig& cfg, int nx, int count,
                                                  std::uint64_t base_seed, const std::vector<double>& times) {
    const SpaceTimeGrid grid = SpaceTimeGrid::make(1, nx);
    const Nonlinearity nl = cfg.nl.build();
    const IndexBox interior = grid.interior_box();
    std::vector<long> slices;
    for (double t : times) {
        if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("sample times must lie in (0, 1]");
        slices.push_back(std::lround(t / grid.dt));
    }
    std::vector<std::vector<double>> out(times.size(), std::vector<double>(static_cast<std::size_t>(count), 0.0));
#pragma omp parallel for schedule(dynamic, 16)
    for (int k = 0; k < count; ++k) {
        const NoiseRealization z = sample_white_noise(grid, base_seed + static_cast<std::uint64_t>(k), interior);
        solve_rd_pde(nl, &z.field, BoundaryData::constant(0.0), grid, {}, [&](long n, std::span<const double> row) {
            for (std::size_t j = 0; j < slices.size(); ++j) {
                if (n != slices[j]) continue;
                double s = 0.0;
                for (double v : row) s = std::max(s, std::abs(v));
                out[j][static_cast<std::size_t>(k)] = s;
            }
        });
    }
    return out;
}

}  // namespace cdfi
