#pragma once

#include <string>
#include <vector>

#include "cdfi/geometry.hpp"

namespace cdfi {

enum class NonlinearityKind {
    polynomial,               // u |u|^{m-1}
    polynomial_plus_bounded,  // u |u|^{m-1} with a bounded perturbation of size g_sup
    sinh,                     // sinh(u)
    log_type,                 // f1 = u log(1+u)^a, f2 = ((1+u)/(a u))^2 log(1+u)^2
    log_plain,                // u log(1+u)^a alone (violates the growth condition)
};

struct Derivs {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

// Antisymmetric damping f = f1 * f2 with Theta(u) = f1(u) / u.
class Nonlinearity {
public:
    static Nonlinearity polynomial(double m);
    static Nonlinearity polynomial_plus_bounded(double m, double g_sup);
    static Nonlinearity sinh_type();
    static Nonlinearity log_type(double alpha_log);
    static Nonlinearity log_plain(double alpha_log);

    NonlinearityKind kind() const { return kind_; }
    double m() const { return m_; }
    double alpha_log() const { return a_; }
    double g_sup() const { return g_sup_; }
    std::string name() const;
    // True when the family is checked against the two-factor assumption set.
    bool uses_split() const { return kind_ == NonlinearityKind::log_type; }

    double f(double u) const;
    Derivs f_derivs(double u) const;
    double f1(double u) const;
    Derivs f1_derivs(double u) const;
    double f2(double u) const;

    double theta(double u) const;
    Derivs theta_derivs(double u) const;
    double theta_floor() const;
    double theta_inverse(double y) const;
    double f_inverse(double y) const;

private:
    NonlinearityKind kind_ = NonlinearityKind::polynomial;
    double m_ = 3.0, a_ = 2.0, g_sup_ = 0.0;
};

struct Condition {
    std::string name;
    bool passed = false;
    double margin = 0.0;  // worst value of (lhs - rhs) / scale over the test grid
};

struct AssumptionReport {
    std::string assumption_set;  // "growth" (single factor) or "split" (f = f1 f2)
    std::vector<Condition> conditions;
    double u_min = 0.0, u_max = 0.0;
    double certified_c = 0.0;  // min of u f'/f on the grid (and its tail limit)
    bool passed() const;
    const Condition* find(const std::string& name) const;
};

// Lower end of the range the barrier evaluates Theta^{-1} on for dimension d.
double barrier_probe_floor(const Nonlinearity& nl, double lambda);

AssumptionReport check_assumptions(const Nonlinearity& nl, double u_max = 1e8, int n_samples = 10000,
                                   double u_min = 0.0);

double default_lambda(int d);

// 1 / eta of the barrier; +infinity on the boundary.
double barrier_denominator(const Nonlinearity& nl, double g_sup, double lambda, const Point& z);
double barrier_eta(const Nonlinearity& nl, double g_sup, double lambda, const Point& z);

enum class BarrierDerivatives { analytic, finite_difference };

struct BarrierOptions {
    double g_sup = 0.0;
    double band = 8.0;  // excluded boundary layer, in units of dx (parabolic distance)
    BarrierDerivatives derivatives = BarrierDerivatives::analytic;
};

struct BarrierReport {
    long nodes_checked = 0;
    long nodes_failed = 0;
    long nodes_excluded = 0;   // eta not representable
    double worst_margin = 0.0; // min over nodes of (rhs - lhs) / rhs
    Point worst_point;
    bool eta_cap_holds = true; // eta <= 1 / f^{-1}(g_sup)
    bool passed() const { return nodes_failed == 0 && eta_cap_holds && nodes_checked > 0; }
};

BarrierReport verify_barrier_inequality(const Nonlinearity& nl, double lambda, const SpaceTimeGrid& grid,
                                        const BarrierOptions& opt = {});

}  // namespace cdfi
