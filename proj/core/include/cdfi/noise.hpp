#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cdfi/field.hpp"

namespace cdfi {

enum class NoiseKind { none, white, colored, colored_plus_dirac };

struct CovarianceSpec {
    NoiseKind kind = NoiseKind::white;
    double lambda = 0.0;  // blow-up exponent of the spatial covariance

    // Supremum of the admissible alpha (zeta in C^{alpha - 2}).
    double regularity_ceiling(int d) const;
    void validate(int d) const;
    std::string name() const;
};

NoiseKind parse_noise_kind(const std::string& s);

struct NoiseRealization {
    ScalarField field;
    CovarianceSpec spec;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    double clamped_mass = 0.0;  // fraction of circulant spectrum clamped to zero
};

// Node values depend only on (grid, spec, seed, node), never on the box, so
// realizations on nested boxes agree where they overlap.
NoiseRealization sample_white_noise(const SpaceTimeGrid& grid, std::uint64_t seed);
NoiseRealization sample_white_noise(const SpaceTimeGrid& grid, std::uint64_t seed, const IndexBox& box);
NoiseRealization sample_colored_noise(const SpaceTimeGrid& grid, const CovarianceSpec& spec, std::uint64_t seed);
NoiseRealization sample_colored_noise(const SpaceTimeGrid& grid, const CovarianceSpec& spec, std::uint64_t seed,
                                      const IndexBox& box);
NoiseRealization sample_noise(const SpaceTimeGrid& grid, const CovarianceSpec& spec, std::uint64_t seed,
                              const IndexBox& box);

// Grid-scale regularized covariance max(|r|, dx)^{-lambda}.
double regularized_covariance(double r, double lambda, double dx);

// Spatial lattice range over which every realization is synthesized.
std::pair<long, long> noise_spatial_span(const SpaceTimeGrid& grid);

// Box holding P_0 + B(0, 1): t in (-1, 1], x in [-2, 2]^d.
IndexBox noise_box(const SpaceTimeGrid& grid, double radius = 1.0);

struct MomentScalingReport {
    std::vector<double> scales;
    std::vector<double> variances;
    double slope = 0.0;
    double expected_slope = 0.0;
    int realizations = 0;
    bool passed(double tol = 0.15) const;
};

// Ensemble variance of (zeta)_T at the given nodes and its log-log slope in T.
MomentScalingReport noise_moment_scaling(const std::vector<NoiseRealization>& ensemble,
                                         const std::vector<double>& scales,
                                         const std::vector<std::pair<long, std::vector<long>>>& centers);

// Streaming form: realization k is produced by make(k) and discarded after use.
MomentScalingReport noise_moment_scaling(const SpaceTimeGrid& grid, const CovarianceSpec& spec, int count,
                                         const std::function<NoiseRealization(int)>& make,
                                         const std::vector<double>& scales,
                                         const std::vector<std::pair<long, std::vector<long>>>& centers);

double expected_variance_slope(const CovarianceSpec& spec, int d);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cdfi
