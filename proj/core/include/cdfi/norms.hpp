#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cdfi/field.hpp"
#include "cdfi/kernels.hpp"

namespace cdfi {

double sup_norm(const ScalarField& h, const IndexBox& region);

struct HolderOptions {
    // Pairs closer than this (parabolic distance) are ignored; <= 0 means 2 dx.
    double min_distance = 0.0;
    // Pairs farther apart than this are ignored (local seminorm).
    double max_distance = std::numeric_limits<double>::infinity();
    // Stop once no unexplored pair can beat the best value by this factor; the
    // result v then satisfies v <= exact <= v (1 + rel_tolerance).
    double rel_tolerance = 0.0;
};

// max |h(z) - h(w)| / d(z, w)^alpha over node pairs of the region. Exact
// (branch and bound over a tree of min/max boxes).
double holder_seminorm(const ScalarField& h, double alpha, const IndexBox& region,
                       const HolderOptions& opt = {});

// Same quantity by enumerating every pair; for tests and small regions.
double holder_seminorm_brute(const ScalarField& h, double alpha, const IndexBox& region,
                             const HolderOptions& opt = {});

// Classical alpha-Hölder seminorm of samples v_k at spacing h (|k - l| h)^alpha,
// pairs with |k - l| < min_sep ignored.
double holder_seminorm_1d(const std::vector<double>& v, double spacing, double alpha, long min_sep = 1);

struct NegNormDetail {
    double value = 0.0;
    double argmax_T = 0.0;
    std::vector<double> scales;
    std::vector<double> scaled_sup;  // T^{2-alpha} sup |zeta_T|
    double t_floor = 0.0;
};

// Caches mollifier plans per (scale, input box) so an ensemble of fields on
// one box reuses every kernel spectrum.
class NegNormEvaluator {
public:
    NegNormEvaluator(const SpaceTimeGrid& grid, KernelShape shape = KernelShape::bump);

    // max over dyadic T in [4 dx, 1] of T^{2-alpha} sup_region |zeta_T|
    NegNormDetail dyadic(const ScalarField& zeta, double alpha, const IndexBox& region) const;
    // Same with T on a log grid of `count` points in [4 dx, 1].
    NegNormDetail dense(const ScalarField& zeta, double alpha, const IndexBox& region, int count = 64) const;
    NegNormDetail at_scales(const ScalarField& zeta, double alpha, const IndexBox& region,
                            const std::vector<double>& scales) const;

    double t_floor() const { return 4.0 * grid_.dx; }

private:
    double scaled_sup(const ScalarField& zeta, double T, double alpha, const IndexBox& region) const;

    SpaceTimeGrid grid_;
    KernelShape shape_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<double, std::vector<long>>, std::shared_ptr<MollifierPlan>> plans_;
};

double neg_holder_norm(const ScalarField& zeta, double alpha, const IndexBox& region);

// sup_region |h_T - h| together with the right-hand side
// T^alpha * max_z [h]_{alpha, B(z,T)} of the mollification error bound.
struct MollificationError {
    double error = 0.0;
    double bound = 0.0;
};
MollificationError mollification_error(const ScalarField& h, double T, double alpha, const IndexBox& region);

// Discrete moment sum_{a,b} w(a,b) d((a dt, b dx), 0)^alpha.
double kernel_moment(const MollifierKernel& k, double alpha);

}  // namespace cdfi
