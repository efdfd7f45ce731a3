#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include "cdfi/kernels.hpp"
#include "fftw_util.hpp"

namespace cdfi {

std::mutex& detail::fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

namespace {

using detail::fftw_buffer;
using detail::FftwBuffer;

void direct_1d(const ScalarField& h, const MollifierKernel& k, ScalarField& out) {
    const IndexBox& ob = out.box();
    const long w = k.width();
    const long nxo = ob.nx(0);
    for (long n = ob.n0; n <= ob.n1; ++n) {
        double* o = out.row(n).data();
        for (long a = 1; a <= k.max_lag; ++a) {
            const double* src = h.row(n - a).data() + (ob.i0[0] - h.box().i0[0]);
            const double* kw = k.weights.data() + static_cast<std::size_t>(a - 1) * w;
            for (long bb = 0; bb < w; ++bb) {
                const double c = kw[bb];
                if (c == 0.0) continue;
                const double* s = src - (bb - k.radius);
                for (long i = 0; i < nxo; ++i) o[i] += c * s[i];
            }
        }
    }
}

void direct_nd(const ScalarField& h, const MollifierKernel& k, ScalarField& out) {
    std::size_t p = 0;
    auto& vals = out.values();
    for_each_node(out.box(), [&](long n, const long* i) { vals[p++] = mollify_at(h, k, n, i); });
}

}  // namespace

IndexBox mollified_box(const IndexBox& in, const MollifierKernel& kernel) {
    return in.shrink(kernel.max_lag, kernel.radius);
}

double mollify_at(const ScalarField& h, const MollifierKernel& k, long n, const long* i) {
    const int d = k.d;
    const long w = k.width();
    std::size_t spatial = 1;
    for (int j = 0; j < d; ++j) spatial *= static_cast<std::size_t>(w);
    std::array<long, kMaxDim> src{};
    double acc = 0.0;
    std::size_t p = 0;
    for (long a = 1; a <= k.max_lag; ++a) {
        for (std::size_t q = 0; q < spatial; ++q, ++p) {
            const double c = k.weights[p];
            if (c == 0.0) continue;
            std::size_t r = q;
            for (int j = d - 1; j >= 0; --j) {
                const long b = static_cast<long>(r % static_cast<std::size_t>(w)) - k.radius;
                r /= static_cast<std::size_t>(w);
                src[j] = i[j] - b;
            }
            acc += c * h.at(n - a, src.data());
        }
    }
    return acc;
}

struct MollifierPlan::Impl {
    int rank = 0;
    std::array<int, kMaxDim + 1> dims{};
    std::size_t real_size = 0, complex_size = 0;
    FftwBuffer<fftw_complex> spectrum;
    fftw_plan forward = nullptr, backward = nullptr;

    ~Impl() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

MollifierPlan::MollifierPlan(const MollifierKernel& kernel, const SpaceTimeGrid& grid, const IndexBox& in)
    : impl_(std::make_unique<Impl>()), grid_(grid), in_(in), out_(mollified_box(in, kernel)) {
    if (out_.empty()) throw std::invalid_argument("insufficient support margin for mollification");
    Impl& m = *impl_;
    const int d = in.d;
    m.rank = d + 1;
    m.dims[0] = static_cast<int>(fft_friendly_size(static_cast<std::size_t>(in.nt())));
    for (int k = 0; k < d; ++k) m.dims[k + 1] = static_cast<int>(fft_friendly_size(static_cast<std::size_t>(in.nx(k))));
    m.real_size = 1;
    for (int r = 0; r < m.rank; ++r) m.real_size *= static_cast<std::size_t>(m.dims[r]);
    const std::size_t last = static_cast<std::size_t>(m.dims[m.rank - 1]);
    m.complex_size = m.real_size / last * (last / 2 + 1);

    auto real = fftw_buffer<double>(m.real_size);
    m.spectrum = fftw_buffer<fftw_complex>(m.complex_size);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        m.forward = fftw_plan_dft_r2c(m.rank, m.dims.data(), real.get(), m.spectrum.get(), FFTW_ESTIMATE);
        m.backward = fftw_plan_dft_c2r(m.rank, m.dims.data(), m.spectrum.get(), real.get(), FFTW_ESTIMATE);
    }
    if (!m.forward || !m.backward) throw std::runtime_error("FFTW planning failed");

    std::fill(real.get(), real.get() + m.real_size, 0.0);
    const long w = kernel.width();
    std::size_t spatial = 1;
    for (int j = 0; j < d; ++j) spatial *= static_cast<std::size_t>(w);
    std::size_t p = 0;
    for (long a = 1; a <= kernel.max_lag; ++a) {
        for (std::size_t q = 0; q < spatial; ++q, ++p) {
            std::size_t off = static_cast<std::size_t>(a);
            std::size_t r = q;
            std::array<long, kMaxDim> b{};
            for (int j = d - 1; j >= 0; --j) {
                b[j] = static_cast<long>(r % static_cast<std::size_t>(w)) - kernel.radius;
                r /= static_cast<std::size_t>(w);
            }
            for (int j = 0; j < d; ++j) {
                const long P = m.dims[j + 1];
                off = off * static_cast<std::size_t>(P) + static_cast<std::size_t>(((b[j] % P) + P) % P);
            }
            real[off] += kernel.weights[p];
        }
    }
    fftw_execute_dft_r2c(m.forward, real.get(), m.spectrum.get());
    const double inv = 1.0 / static_cast<double>(m.real_size);
    for (std::size_t q = 0; q < m.complex_size; ++q) {
        m.spectrum[q][0] *= inv;
        m.spectrum[q][1] *= inv;
    }
}

MollifierPlan::~MollifierPlan() = default;

ScalarField MollifierPlan::apply(const ScalarField& h) const { return apply(h, out_); }

ScalarField MollifierPlan::apply(const ScalarField& h, const IndexBox& keep) const {
    if (!h.box().contains(in_)) throw std::invalid_argument("field does not cover the plan's input box");
    const IndexBox ob = out_.intersect(keep);
    if (ob.empty()) throw std::invalid_argument("requested output box is empty");
    const Impl& m = *impl_;
    const int d = in_.d;
    auto real = fftw_buffer<double>(m.real_size);
    auto spec = fftw_buffer<fftw_complex>(m.complex_size);
    std::fill(real.get(), real.get() + m.real_size, 0.0);

    auto real_offset = [&](long n, const long* i) {
        std::size_t off = static_cast<std::size_t>(n - in_.n0);
        for (int k = 0; k < d; ++k)
            off = off * static_cast<std::size_t>(m.dims[k + 1]) + static_cast<std::size_t>(i[k] - in_.i0[k]);
        return off;
    };
    if (d == 1) {
        const long w = in_.nx(0);
        for (long n = in_.n0; n <= in_.n1; ++n) {
            const double* src = h.row(n).data() + (in_.i0[0] - h.box().i0[0]);
            std::copy(src, src + w, real.get() + real_offset(n, &in_.i0[0]));
        }
    } else {
        for_each_node(in_, [&](long n, const long* i) { real[real_offset(n, i)] = h.at(n, i); });
    }
    fftw_execute_dft_r2c(m.forward, real.get(), spec.get());
    for (std::size_t q = 0; q < m.complex_size; ++q) {
        const double ar = spec[q][0], ai = spec[q][1];
        const double br = m.spectrum[q][0], bi = m.spectrum[q][1];
        spec[q][0] = ar * br - ai * bi;
        spec[q][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(m.backward, spec.get(), real.get());

    ScalarField out(grid_, ob);
    if (d == 1) {
        const long w = ob.nx(0);
        for (long n = ob.n0; n <= ob.n1; ++n) {
            const double* src = real.get() + real_offset(n, &ob.i0[0]);
            std::copy(src, src + w, out.row(n).data());
        }
    } else {
        std::size_t p = 0;
        auto& vals = out.values();
        for_each_node(ob, [&](long n, const long* i) { vals[p++] = real[real_offset(n, i)]; });
    }
    return out;
}

ScalarField mollify(const ScalarField& h, const MollifierKernel& kernel, ConvolutionMethod method) {
    if (kernel.d != h.box().d) throw std::invalid_argument("kernel and field dimensions differ");
    if (kernel.dt != h.grid().dt || kernel.dx != h.grid().dx)
        throw std::invalid_argument("kernel sampled on a different grid");
    const IndexBox ob = mollified_box(h.box(), kernel);
    if (ob.empty()) throw std::invalid_argument("insufficient support margin for mollification");
    if (method == ConvolutionMethod::automatic) {
        double fft_n = static_cast<double>(fft_friendly_size(static_cast<std::size_t>(h.box().nt())));
        for (int k = 0; k < h.box().d; ++k)
            fft_n *= static_cast<double>(fft_friendly_size(static_cast<std::size_t>(h.box().nx(k))));
        const double fft_cost = 15.0 * fft_n * std::log2(fft_n);
        const double direct_cost = static_cast<double>(ob.size()) * static_cast<double>(kernel.footprint());
        method = direct_cost > fft_cost ? ConvolutionMethod::fft : ConvolutionMethod::direct;
    }
    if (method == ConvolutionMethod::fft) {
        MollifierPlan plan(kernel, h.grid(), h.box());
        return plan.apply(h);
    }
    ScalarField out(h.grid(), ob);
    if (h.box().d == 1)
        direct_1d(h, kernel, out);
    else
        direct_nd(h, kernel, out);
    return out;
}

ScalarField mollify(const ScalarField& h, double T, ConvolutionMethod method) {
    return mollify(h, make_kernel(T, h.box().d, h.grid()), method);
}

}  // namespace cdfi
