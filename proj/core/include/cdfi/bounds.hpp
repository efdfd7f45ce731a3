#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdfi/field.hpp"
#include "cdfi/nonlinearity.hpp"

namespace cdfi {

struct BoundTerm {
    std::string label;
    double value = 0.0;
};

// One measured left side against the maximum of its right-side terms.
struct BoundReport {
    std::string experiment;
    std::uint64_t seed = 0;
    double magnitude = 0.0;
    double R = 0.0;
    double lhs = 0.0;
    std::vector<BoundTerm> rhs_terms;
    double rhs = 0.0;
    double ratio = 0.0;
    std::map<std::string, double> extra;  // context: alpha, dx, t_floor, ...

    void finish();  // rhs = max of terms, ratio = lhs / rhs
};

// max{ t^{-1/(m-1)}, [w]_alpha^{1/(1+(m-1)alpha)} }
double ode_bound_rhs(double m, double alpha, double w_holder, double t);
std::vector<BoundTerm> ode_bound_terms(double m, double alpha, double w_holder, double t);

// max{ R^{-2/(m-1)}, [zeta]^{1/(1+(m-1)alpha/2)}, ||g||^{1/m} }
double pde_bound_rhs(double m, double alpha, double R, double zeta_norm, double g_sup);
std::vector<BoundTerm> pde_bound_terms(double m, double alpha, double R, double zeta_norm, double g_sup);
// Same bound written with the exponent 2 / (2 + (m-1) alpha).
double pde_bound_rhs_alt(double m, double alpha, double R, double zeta_norm, double g_sup);

struct MaxPrincipleBound {
    bool infinite = false;   // boundary point
    double sharp = 0.0;      // 2 / eta
    double envelope = 0.0;   // max{Theta^{-1}(1/(lambda^2 s^2)), f^{-1}(g)}
    double constant = 0.0;   // sharp / envelope
};
MaxPrincipleBound maxprinciple_bound(const Nonlinearity& nl, double g_sup, double lambda, const Point& z);

// max{ Theta^{-1}((lambda R)^{-2}), f^{-1}(2 g), ||w|| }
double remainder_bound_rhs(const Nonlinearity& nl, double g_sup, double w_sup, double R, double lambda);

struct CommutatorResult {
    ScalarField field;     // u_T |u_T|^{m-1} - (u |u|^{m-1})_T
    double sup = 0.0;      // over the requested region
    double bound = 0.0;    // 2m ||u||^{m-1} T^alpha [u]_{alpha, local}
    double u_sup = 0.0;    // over region + B(0,T)
    double local_holder = 0.0;  // lower estimate, within 1% of the exact value
};
CommutatorResult commutator_field(const ScalarField& u, double m, double T, const IndexBox& region,
                                  double alpha = 0.5);

struct SchauderDetail {
    double ratio = 0.0;
    double holder = 0.0;       // [u]_alpha
    double forcing_norm = 0.0; // max_T T^{2-alpha} ||(d_t - Laplacian) u)_T||
};
// u must vanish on the outer faces of its box (compact support).
SchauderDetail schauder_ratio(const ScalarField& u, double alpha);

// Spatial field u_k = u(-1 + k dx), k = 0..n-1.
BoundReport interpolation_check(const std::vector<double>& u, double dx, double alpha, double m);

}  // namespace cdfi
