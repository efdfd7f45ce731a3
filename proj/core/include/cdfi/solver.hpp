#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cdfi/field.hpp"
#include "cdfi/nonlinearity.hpp"

namespace cdfi {

enum class BoundaryFamily { constant, oscillating, random };

BoundaryFamily parse_boundary_family(const std::string& s);
std::string to_string(BoundaryFamily f);

// Initial and lateral Dirichlet data. The theorems are uniform over this data,
// so families of arbitrary magnitude are selectable.
struct BoundaryData {
    BoundaryFamily family = BoundaryFamily::constant;
    double magnitude = 0.0;
    std::uint64_t seed = 0;

    static BoundaryData constant(double M) { return {BoundaryFamily::constant, M, 0}; }
    double value(double t, std::span<const double> x) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
};

// Flow of xdot = -f(x) over a duration tau.
double reaction_flow(const Nonlinearity& nl, double x0, double tau);

// x(t) = x0 - int f(x) + w(t) by Lie splitting; w holds w(k / n_steps), k = 0..n_steps.
Trajectory solve_ode(const Nonlinearity& nl, double x0, const std::vector<double>& w, int n_steps);

// Brownian path sampled at k / n_steps.
std::vector<double> brownian_path(int n_steps, std::uint64_t seed);

using Forcing = std::function<double(double t, std::span<const double> x)>;
using Multiplier = std::function<double(double t, std::span<const double> x, double u)>;

struct SolveOptions {
    Forcing g;              // bounded forcing, zero when empty
    Multiplier sigma;       // |sigma| <= 1, constant one when empty
    bool diffusion = true;  // off: every node follows its own reaction ODE
};

// Called with each completed time slice; row holds all spatial nodes.
using RowObserver = std::function<void(long n, std::span<const double> row)>;

// Strang splitting: half reaction, half the explicit diffusion sub-steps, the
// forcing and noise increment, the other half, half reaction. zeta may be null
// (no noise); otherwise it must cover every interior node. Returns u on the
// full grid.
ScalarField solve_rd_pde(const Nonlinearity& nl, const ScalarField* zeta, const BoundaryData& bc,
                         const SpaceTimeGrid& grid, const SolveOptions& opt = {});
void solve_rd_pde(const Nonlinearity& nl, const ScalarField* zeta, const BoundaryData& bc, const SpaceTimeGrid& grid,
                  const SolveOptions& opt, const RowObserver& observe);

// (d_t - Laplacian) w = zeta with zero initial and lateral data.
ScalarField solve_linear_heat(const ScalarField* zeta, const SpaceTimeGrid& grid);

ScalarField remainder(const ScalarField& u, const ScalarField& w);

}  // namespace cdfi
