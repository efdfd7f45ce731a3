#include "cdfi/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace cdfi {

NegNormEvaluator::NegNormEvaluator(const SpaceTimeGrid& grid, KernelShape shape) : grid_(grid), shape_(shape) {}

double NegNormEvaluator::scaled_sup(const ScalarField& zeta, double T, double alpha, const IndexBox& region) const {
    const MollifierKernel k = make_kernel(T, grid_.d, grid_, shape_);
    const IndexBox in = region.grow(k.max_lag, k.radius);
    if (!zeta.box().contains(in)) throw std::invalid_argument("noise field does not cover region + B(0,T)");

    double fft_n = static_cast<double>(fft_friendly_size(static_cast<std::size_t>(in.nt())));
    for (int j = 0; j < in.d; ++j) fft_n *= static_cast<double>(fft_friendly_size(static_cast<std::size_t>(in.nx(j))));
    const double direct_cost = static_cast<double>(region.size()) * static_cast<double>(k.footprint());
    double s = 0.0;
    if (direct_cost < 10.0 * fft_n * std::log2(fft_n)) {
        s = sup_norm(mollify(zeta.restrict_to(in), k, ConvolutionMethod::direct), region);
    } else {
        std::shared_ptr<MollifierPlan> plan;
        std::vector<long> key{in.n0, in.n1};
        for (int j = 0; j < in.d; ++j) {
            key.push_back(in.i0[j]);
            key.push_back(in.i1[j]);
        }
        {
            std::lock_guard lock(mutex_);
            auto& slot = plans_[{T, key}];
            if (!slot) slot = std::make_shared<MollifierPlan>(k, grid_, in);
            plan = slot;
        }
        s = sup_norm(plan->apply(zeta, region), region);
    }
    return std::pow(T, 2.0 - alpha) * s;
}

NegNormDetail NegNormEvaluator::at_scales(const ScalarField& zeta, double alpha, const IndexBox& region,
                                          const std::vector<double>& scales) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (scales.empty()) throw std::invalid_argument("no admissible scale");
    NegNormDetail out;
    out.t_floor = t_floor();
    out.scales = scales;
    for (double T : scales) {
        const double v = scaled_sup(zeta, T, alpha, region);
        out.scaled_sup.push_back(v);
        if (out.scaled_sup.size() == 1 || v > out.value) {
            out.value = v;
            out.argmax_T = T;
        }
    }
    return out;
}

NegNormDetail NegNormEvaluator::dyadic(const ScalarField& zeta, double alpha, const IndexBox& region) const {
    return at_scales(zeta, alpha, region, dyadic_scales(t_floor()));
}

NegNormDetail NegNormEvaluator::dense(const ScalarField& zeta, double alpha, const IndexBox& region, int count) const {
    std::vector<double> scales;
    const double lo = std::log(t_floor());
    for (int j = 0; j < count; ++j) scales.push_back(std::exp(lo * (1.0 - static_cast<double>(j) / (count - 1))));
    scales.back() = 1.0;
    return at_scales(zeta, alpha, region, scales);
}

double neg_holder_norm(const ScalarField& zeta, double alpha, const IndexBox& region) {
    return NegNormEvaluator(zeta.grid()).dyadic(zeta, alpha, region).value;
}

MollificationError mollification_error(const ScalarField& h, double T, double alpha, const IndexBox& region) {
    const MollifierKernel k = make_kernel(T, h.box().d, h.grid());
    const IndexBox in = region.grow(k.max_lag, k.radius);
    if (!h.box().contains(in)) throw std::invalid_argument("insufficient support margin for mollification");
    const ScalarField hin = h.restrict_to(in);
    const ScalarField hT = mollify(hin, k);
    MollificationError out;
    for_each_node(region, [&](long n, const long* i) {
        out.error = std::max(out.error, std::abs(hT.at(n, i) - h.at(n, i)));
    });
    HolderOptions opt;
    opt.max_distance = T;
    opt.rel_tolerance = 0.01;  // lower estimate, so the bound only gets tighter
    out.bound = std::pow(T, alpha) * holder_seminorm(hin, alpha, in, opt);
    return out;
}

double kernel_moment(const MollifierKernel& k, double alpha) {
    double acc = 0.0;
    std::size_t p = 0;
    const long w = k.width();
    std::size_t spatial = 1;
    for (int j = 0; j < k.d; ++j) spatial *= static_cast<std::size_t>(w);
    for (long a = 1; a <= k.max_lag; ++a)
        for (std::size_t q = 0; q < spatial; ++q, ++p) {
            std::size_t r = q;
            double x2 = 0.0;
            for (int j = 0; j < k.d; ++j) {
                const double b = static_cast<double>(static_cast<long>(r % static_cast<std::size_t>(w)) - k.radius) * k.dx;
                r /= static_cast<std::size_t>(w);
                x2 += b * b;
            }
            const double dist = std::max(std::sqrt(x2), std::sqrt(static_cast<double>(a) * k.dt));
            acc += k.weights[p] * std::pow(dist, alpha);
        }
    return acc;
}

}  // namespace cdfi
