#include "cdfi/noise.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <stdexcept>

#include "cdfi/kernels.hpp"
#include "fftw_util.hpp"

namespace cdfi {

namespace {

constexpr std::uint32_t kWhiteSalt = 0x57484954u;
constexpr std::uint32_t kColoredSalt = 0x434f4c52u;
constexpr std::uint32_t kDiracSalt = 0x44495243u;

std::mt19937_64 row_engine(std::uint64_t seed, long row, std::uint32_t salt) {
    const auto r = static_cast<std::uint64_t>(row);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32), salt};
    return std::mt19937_64(seq);
}

long floor_div2(long n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); }

void add_white(ScalarField& out, const SpaceTimeGrid& grid, std::uint64_t seed, std::uint32_t salt) {
    const auto [lo, hi] = noise_spatial_span(grid);
    const IndexBox& box = out.box();
    const double sd = 1.0 / std::sqrt(grid.dt * grid.dx);
    std::vector<double> row(static_cast<std::size_t>(hi - lo + 1));
    for (long n = box.n0; n <= box.n1; ++n) {
        auto eng = row_engine(seed, n, salt);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (double& v : row) v = normal(eng);
        auto dst = out.row(n);
        for (long i = box.i0[0]; i <= box.i1[0]; ++i)
            dst[static_cast<std::size_t>(i - box.i0[0])] += sd * row[static_cast<std::size_t>(i - lo)];
    }
}

void check_box(const SpaceTimeGrid& grid, const IndexBox& box) {
    const auto [lo, hi] = noise_spatial_span(grid);
    if (box.d != grid.d || box.empty()) throw std::invalid_argument("invalid noise box");
    for (int k = 0; k < box.d; ++k)
        if (box.i0[k] < lo || box.i1[k] > hi) throw std::invalid_argument("noise box exceeds the synthesis span");
}

}  // namespace

double CovarianceSpec::regularity_ceiling(int d) const {
    switch (kind) {
        case NoiseKind::none: return 1.0;
        case NoiseKind::white: return (2.0 - d) / 2.0;
        case NoiseKind::colored: return (2.0 - lambda) / 2.0;
        case NoiseKind::colored_plus_dirac: return std::min((2.0 - lambda) / 2.0, 0.5);
    }
    return 0.0;
}

void CovarianceSpec::validate(int d) const {
    switch (kind) {
        case NoiseKind::none: return;
        case NoiseKind::white:
            if (d != 1) throw std::invalid_argument("white noise requires d = 1");
            return;
        case NoiseKind::colored:
            if (!(lambda > 0.0 && lambda < 2.0)) throw std::invalid_argument("noise lambda must lie in (0, 2)");
            return;
        case NoiseKind::colored_plus_dirac:
            if (d != 1) throw std::invalid_argument("colored_plus_dirac requires d = 1");
            if (!(lambda > 1.0 && lambda < 2.0)) throw std::invalid_argument("colored_plus_dirac requires lambda in (1, 2)");
            return;
    }
}

std::string CovarianceSpec::name() const {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::white: return "white";
        case NoiseKind::colored: return "colored";
        case NoiseKind::colored_plus_dirac: return "colored_plus_dirac";
    }
    return "unknown";
}

NoiseKind parse_noise_kind(const std::string& s) {
    if (s == "none") return NoiseKind::none;
    if (s == "white") return NoiseKind::white;
    if (s == "colored") return NoiseKind::colored;
    if (s == "colored_plus_dirac") return NoiseKind::colored_plus_dirac;
    throw std::invalid_argument("unknown noise kind '" + s + "'");
}

double regularized_covariance(double r, double lambda, double dx) { return std::pow(std::max(std::abs(r), dx), -lambda); }

std::pair<long, long> noise_spatial_span(const SpaceTimeGrid& grid) {
    return {-(grid.nx - 1), 2L * (grid.nx - 1)};
}

IndexBox noise_box(const SpaceTimeGrid& grid, double radius) {
    const IndexBox p0 = cylinder_region(0.0, grid);
    const long lag = static_cast<long>(std::ceil(radius * radius / grid.dt - 1e-12)) - 1;
    const long rad = static_cast<long>(std::ceil(radius / grid.dx - 1e-12)) - 1;
    return p0.grow(lag, rad);
}

NoiseRealization sample_white_noise(const SpaceTimeGrid& grid, std::uint64_t seed) {
    return sample_white_noise(grid, seed, grid.full_box());
}

NoiseRealization sample_white_noise(const SpaceTimeGrid& grid, std::uint64_t seed, const IndexBox& box) {
    if (grid.d != 1) throw std::invalid_argument("white noise requires d = 1");
    check_box(grid, box);
    NoiseRealization r{ScalarField(grid, box), {NoiseKind::white, 0.0}, seed, 1.0, 0.0};
    add_white(r.field, grid, seed, kWhiteSalt);
    return r;
}

NoiseRealization sample_colored_noise(const SpaceTimeGrid& grid, const CovarianceSpec& spec, std::uint64_t seed) {
    return sample_colored_noise(grid, spec, seed, grid.full_box());
}

NoiseRealization sample_colored_noise(const SpaceTimeGrid& grid, const CovarianceSpec& spec, std::uint64_t seed,
                                      const IndexBox& box) {
    if (spec.kind != NoiseKind::colored && spec.kind != NoiseKind::colored_plus_dirac)
        throw std::invalid_argument("colored noise requires a colored covariance");
    spec.validate(grid.d);
    check_box(grid, box);
    const int d = grid.d;
    const auto [lo, hi] = noise_spatial_span(grid);
    const long L = hi - lo + 1;
    const int M = static_cast<int>(fft_friendly_size(static_cast<std::size_t>(2 * L)));
    std::size_t N = 1;
    std::array<int, kMaxDim> dims{};
    for (int k = 0; k < d; ++k) {
        dims[k] = M;
        N *= static_cast<std::size_t>(M);
    }

    using cplx = std::complex<double>;
    std::vector<cplx> buf(N), out(N);
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft(d, dims.data(), reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("FFTW planning failed");

    // Circulant eigenvalues of the wrapped covariance.
    for (std::size_t q = 0; q < N; ++q) {
        std::size_t r = q;
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
            long j = static_cast<long>(r % static_cast<std::size_t>(M));
            r /= static_cast<std::size_t>(M);
            j = std::min(j, M - j);
            s += static_cast<double>(j * j);
        }
        buf[q] = regularized_covariance(std::sqrt(s) * grid.dx, spec.lambda, grid.dx);
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()), reinterpret_cast<fftw_complex*>(out.data()));
    std::vector<double> amp(N);
    double neg = 0.0, tot = 0.0;
    for (std::size_t q = 0; q < N; ++q) {
        const double ev = out[q].real();
        tot += std::abs(ev);
        if (ev < 0.0) neg += -ev;
        amp[q] = std::sqrt(std::max(ev, 0.0) / static_cast<double>(N));
    }

    NoiseRealization res{ScalarField(grid, box), spec, seed, 1.0, tot > 0 ? neg / tot : 0.0};
    const double time_scale = 1.0 / std::sqrt(grid.dt);
    long cached_pair = std::numeric_limits<long>::min();
    for (long n = box.n0; n <= box.n1; ++n) {
        const long pair = floor_div2(n);
        if (pair != cached_pair) {
            auto eng = row_engine(seed, pair, kColoredSalt);
            std::normal_distribution<double> normal(0.0, 1.0);
            for (std::size_t q = 0; q < N; ++q) {
                const double a = normal(eng);
                const double b = normal(eng);
                buf[q] = amp[q] * cplx(a, b);
            }
            fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(out.data()));
            cached_pair = pair;
        }
        const bool imag = (n - 2 * pair) == 1;
        auto dst = res.field.row(n);
        std::size_t p = 0;
        IndexBox slice = box;
        slice.n0 = slice.n1 = n;
        for_each_node(slice, [&](long, const long* i) {
            std::size_t off = 0;
            for (int k = 0; k < d; ++k) off = off * static_cast<std::size_t>(M) + static_cast<std::size_t>(i[k] - lo);
            dst[p++] = time_scale * (imag ? out[off].imag() : out[off].real());
        });
    }
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (spec.kind == NoiseKind::colored_plus_dirac) add_white(res.field, grid, seed, kDiracSalt);
    return res;
}

NoiseRealization sample_noise(const SpaceTimeGrid& grid, const CovarianceSpec& spec, std::uint64_t seed,
                              const IndexBox& box) {
    switch (spec.kind) {
        case NoiseKind::none: {
            NoiseRealization r{ScalarField(grid, box), spec, seed, 1.0, 0.0};
            return r;
        }
        case NoiseKind::white: return sample_white_noise(grid, seed, box);
        default: return sample_colored_noise(grid, spec, seed, box);
    }
}

double expected_variance_slope(const CovarianceSpec& spec, int d) {
    switch (spec.kind) {
        case NoiseKind::white: return -(d + 2.0);
        case NoiseKind::colored:
        case NoiseKind::colored_plus_dirac: return -(spec.lambda + 2.0);
        case NoiseKind::none: return 0.0;
    }
    return 0.0;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

bool MomentScalingReport::passed(double tol) const { return std::abs(slope - expected_slope) <= tol; }

MomentScalingReport noise_moment_scaling(const SpaceTimeGrid& grid, const CovarianceSpec& spec, int count,
                                         const std::function<NoiseRealization(int)>& make,
                                         const std::vector<double>& scales,
                                         const std::vector<std::pair<long, std::vector<long>>>& centers) {
    if (count < 2) throw std::invalid_argument("too few realizations");
    if (centers.empty()) throw std::invalid_argument("no evaluation nodes");
    std::vector<MollifierKernel> kernels;
    for (double T : scales) kernels.push_back(make_kernel(T, grid.d, grid));
    const std::size_t nk = kernels.size(), nc = centers.size();
    std::vector<double> sum(nk * nc, 0.0), sum2(nk * nc, 0.0);
    for (int r = 0; r < count; ++r) {
        const NoiseRealization z = make(r);
        for (std::size_t k = 0; k < nk; ++k)
            for (std::size_t c = 0; c < nc; ++c) {
                const double v = mollify_at(z.field, kernels[k], centers[c].first, centers[c].second.data());
                sum[k * nc + c] += v;
                sum2[k * nc + c] += v * v;
            }
    }
    MomentScalingReport rep;
    rep.realizations = count;
    rep.expected_slope = expected_variance_slope(spec, grid.d);
    rep.scales = scales;
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < nk; ++k) {
        double var = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double mean = sum[k * nc + c] / count;
            var += (sum2[k * nc + c] - count * mean * mean) / (count - 1);
        }
        var /= static_cast<double>(nc);
        rep.variances.push_back(var);
        lx.push_back(std::log(scales[k]));
        ly.push_back(std::log(var));
    }
    rep.slope = nk >= 2 ? fit_slope(lx, ly) : 0.0;
    return rep;
}

MomentScalingReport noise_moment_scaling(const std::vector<NoiseRealization>& ensemble,
                                         const std::vector<double>& scales,
                                         const std::vector<std::pair<long, std::vector<long>>>& centers) {
    if (ensemble.size() < 2) throw std::invalid_argument("too few realizations");
    const auto& grid = ensemble.front().field.grid();
    return noise_moment_scaling(grid, ensemble.front().spec, static_cast<int>(ensemble.size()),
                                [&](int k) { return ensemble[static_cast<std::size_t>(k)]; }, scales, centers);
}

}  // namespace cdfi
