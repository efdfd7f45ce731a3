#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdfi/bounds.hpp"
#include "cdfi/noise.hpp"
#include "cdfi/nonlinearity.hpp"
#include "cdfi/solver.hpp"

namespace cdfi {

struct NonlinearitySpec {
    std::string kind = "polynomial";
    double m = 3.0;
    double alpha_log = 2.0;
    double g_sup = 0.0;

    Nonlinearity build() const;
};

struct OdeSection {
    std::vector<double> x0{1.0, 1000.0};
    int n_steps = 4096;
    int paths = 1000;
    bool brownian = true;
};

struct TailSection {
    double quantile = 0.95;
    std::string samples_file;  // one positive value per line
};

struct InvariantSection {
    int nx = 65;
    int samples = 10000;
    int burn_in = 5000;
    int thin = 20;
    bool weighted = true;
    int spde_realizations = 10000;
};

struct SchauderSection {
    std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
    std::vector<int> nx{129, 257};
};

struct CommutatorSection {
    int fields = 100;
    int nx = 129;
    int modes = 4;
    std::vector<double> scales{0.0625, 0.125, 0.25};
};

struct InterpSection {
    int fields = 1000;
    int nx = 257;
};

struct NoiseNormSection {
    int realizations = 200;
    int nx_variance = 129;
    int nx_dense = 65;
    int dense_count = 64;
    int dense_realizations = 100;
};

struct ExperimentConfig {
    NonlinearitySpec nl;
    int d = 1;
    int nx = 257;
    CovarianceSpec noise{NoiseKind::white, 0.0};
    double sigma = 1.0;
    double alpha = 0.49;
    double lambda = 0.0;  // barrier lambda; filled by defaults
    std::vector<double> R{0.125, 0.25, 0.375};
    BoundaryFamily boundary = BoundaryFamily::constant;
    std::vector<double> magnitudes{1.0, 1e2, 1e4, 1e6};
    int ensemble = 200;
    std::uint64_t base_seed = 1;
    bool dump_fields = false;

    OdeSection ode;
    TailSection tails;
    InvariantSection invariant;
    SchauderSection schauder;
    CommutatorSection commutator;
    InterpSection interp;
    NoiseNormSection noise_norm;

    SpaceTimeGrid grid() const { return SpaceTimeGrid::make(d, nx); }
    // Throws with every violated constraint listed.
    void validate() const;
};

struct TailFit {
    double beta = 0.0;
    double c = 0.0;
    double x_min = 0.0, x_max = 0.0;  // fit range
    double residual = 0.0;
    double quantile = 0.0;
    long n_samples = 0;
    long n_fit = 0;
};

// Slope of log(-log S) against log x over the samples above the q-quantile,
// S the empirical survival function at Hazen plotting positions.
TailFit estimate_tail_exponent(std::vector<double> samples, double q = 0.95);

struct InvariantSamples {
    std::vector<std::vector<double>> fields;  // interior + endpoints, length nx
    double acceptance = 0.0;
    double step = 0.0;                       // tuned pCN step
    double integrated_autocorrelation = 0.0; // of sup |u| across retained samples
    double mean_potential = 0.0;             // average of int |u|^{m+1}
    bool acceptance_ok = true;
};

struct InvariantOptions {
    int samples = 10000;
    int burn_in = 5000;
    int thin = 20;
    bool weighted = true;
    double target_acceptance = 0.3;
};

// pCN chain on Dirichlet bridges over [-1, 1] reweighted by
// exp(-2 int |u|^{m+1} / (m+1)); the reference Gaussian is the stationary
// law of the linear scheme, variance (1 - x^2) / 4.
InvariantSamples sample_invariant_measure(double m, int nx, std::uint64_t seed, const InvariantOptions& opt = {});

struct IntegrabilityReport {
    double beta_spde = 0.0;
    double beta_invariant = 0.0;
    double target = 0.0;            // (m + 3) / 2
    double predicted_sup = 0.0;     // 1 + (m + 1) alpha
    double predicted_holder = 0.0;  // 2 + (m - 1) alpha
    double band_lo = 2.2, band_hi = 3.8, max_gap = 0.6;
    bool passed() const;
};

IntegrabilityReport compare_integrability(double m, double alpha, const TailFit& spde, const TailFit& invariant,
                                          double band_lo = 2.2, double band_hi = 3.8, double max_gap = 0.6);

struct ComingDownSummary {
    std::vector<BoundReport> reports;
    std::vector<double> magnitudes;
    std::vector<double> max_ratio;     // per magnitude, over seeds and R
    std::vector<double> median_ratio;  // per magnitude
    double log_slope = 0.0;            // of max_ratio against magnitude
    bool all_finite = true;
};

ComingDownSummary run_coming_down(const ExperimentConfig& cfg);

// Smooth bounded forcing g_sup cos(5 t + 3 sum x); empty when g_sup = 0.
Forcing smooth_forcing(double g_sup);

// d = 1, zero initial and lateral data, white noise. out[j][k] is the sup of
// |u| over the time slice nearest times[j] for realization base_seed + k.
std::vector<std::vector<double>> spde_sup_samples(const ExperimentConfig& cfg, int nx, int count,
                                                  std::uint64_t base_seed, const std::vector<double>& times);

std::vector<double> quantiles(std::vector<double> v, const std::vector<double>& qs);

}  // namespace cdfi
