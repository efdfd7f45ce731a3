#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cdfi/field.hpp"
#include "cdfi/geometry.hpp"

namespace cdfi {

enum class KernelShape {
    bump,         // c exp(-1/(1 - rho^2)), rho^2 = |x|^2 + (2t - 1)^2
    double_bump,  // Psi_{1/2} * Psi_{1/2}
};

// Psi_T(t, x) = T^{-(d+2)} Psi(x/T, t/T^2) sampled at positive time lags
// a*dt (a = 1..max_lag) and spatial lags b*dx (|b_k| <= radius). The weights
// include the cell volume dt*dx^d and sum to one.
struct MollifierKernel {
    double T = 1.0;
    int d = 1;
    KernelShape shape = KernelShape::bump;
    long max_lag = 0;
    long radius = 0;
    std::vector<double> weights;  // [a-1][b_1 + radius]...[b_d + radius]
    double mass = 1.0;            // quadrature mass before renormalization
    double dt = 0.0, dx = 0.0;

    long width() const { return 2 * radius + 1; }
    std::size_t footprint() const { return weights.size(); }
    double weight(long a, const long* b) const;
    // Continuum kernel value Psi_T at lag (a*dt, b*dx).
    double density(long a, const long* b) const { return weight(a, b) / (dt * cell()); }
    double cell() const;
    double sup_density() const;
};

// Continuum bump Psi(t, x) for t in (0,1), |x| < 1, normalized to unit mass.
double bump_profile(double t, double x2, int d);

MollifierKernel make_kernel(double T, int d, const SpaceTimeGrid& grid,
                            KernelShape shape = KernelShape::bump);

enum class ConvolutionMethod { automatic, direct, fft };

// h_T on the largest box where the past-looking convolution is defined.
ScalarField mollify(const ScalarField& h, const MollifierKernel& kernel,
                    ConvolutionMethod method = ConvolutionMethod::automatic);
ScalarField mollify(const ScalarField& h, double T,
                    ConvolutionMethod method = ConvolutionMethod::automatic);

// h_T evaluated at a single node.
double mollify_at(const ScalarField& h, const MollifierKernel& kernel, long n, const long* i);

// Output box of a mollification of a field living on `in`.
IndexBox mollified_box(const IndexBox& in, const MollifierKernel& kernel);

// Reusable FFT convolution for a fixed kernel and input box. Caches the kernel
// spectrum so an ensemble of fields on the same box costs one forward and one
// inverse transform each.
class MollifierPlan {
public:
    MollifierPlan(const MollifierKernel& kernel, const SpaceTimeGrid& grid, const IndexBox& in);
    ~MollifierPlan();
    MollifierPlan(const MollifierPlan&) = delete;
    MollifierPlan& operator=(const MollifierPlan&) = delete;

    const IndexBox& input_box() const { return in_; }
    const IndexBox& output_box() const { return out_; }
    // Convolves h restricted to the plan's input box; output lives on `out`
    // intersected with `keep` when given.
    ScalarField apply(const ScalarField& h) const;
    ScalarField apply(const ScalarField& h, const IndexBox& keep) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    SpaceTimeGrid grid_;
    IndexBox in_, out_;
};

// Dyadic scales 2^{-k} in [t_floor, 1].
std::vector<double> dyadic_scales(double t_floor);

// Smallest size >= n with prime factors in {2, 3, 5, 7}.
std::size_t fft_friendly_size(std::size_t n);

}  // namespace cdfi
