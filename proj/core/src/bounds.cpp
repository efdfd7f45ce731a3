#include "cdfi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cdfi/kernels.hpp"
#include "cdfi/norms.hpp"

namespace cdfi {

namespace {

void check_m_alpha(double m, double alpha) {
    if (!(m > 1.0)) throw std::invalid_argument("m must exceed 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
}

double max_term(const std::vector<BoundTerm>& terms) {
    double v = 0.0;
    for (const auto& t : terms) v = std::max(v, t.value);
    return v;
}

}  // namespace

void BoundReport::finish() {
    rhs = max_term(rhs_terms);
    ratio = rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
}

std::vector<BoundTerm> ode_bound_terms(double m, double alpha, double w_holder, double t) {
    check_m_alpha(m, alpha);
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    return {{"time", std::pow(t, -1.0 / (m - 1.0))},
            {"path", std::pow(w_holder, 1.0 / (1.0 + (m - 1.0) * alpha))}};
}

double ode_bound_rhs(double m, double alpha, double w_holder, double t) {
    return max_term(ode_bound_terms(m, alpha, w_holder, t));
}

std::vector<BoundTerm> pde_bound_terms(double m, double alpha, double R, double zeta_norm, double g_sup) {
    check_m_alpha(m, alpha);
    if (!(R > 0.0 && R < 0.5)) throw std::invalid_argument("R must lie in (0, 1/2)");
    return {{"distance", std::pow(R, -2.0 / (m - 1.0))},
            {"noise", std::pow(zeta_norm, 1.0 / (1.0 + (m - 1.0) * alpha / 2.0))},
            {"forcing", std::pow(g_sup, 1.0 / m)}};
}

double pde_bound_rhs(double m, double alpha, double R, double zeta_norm, double g_sup) {
    return max_term(pde_bound_terms(m, alpha, R, zeta_norm, g_sup));
}

double pde_bound_rhs_alt(double m, double alpha, double R, double zeta_norm, double g_sup) {
    check_m_alpha(m, alpha);
    if (!(R > 0.0 && R < 0.5)) throw std::invalid_argument("R must lie in (0, 1/2)");
    return std::max({std::pow(R, -2.0 / (m - 1.0)), std::pow(zeta_norm, 2.0 / (2.0 + (m - 1.0) * alpha)),
                     std::pow(g_sup, 1.0 / m)});
}

MaxPrincipleBound maxprinciple_bound(const Nonlinearity& nl, double g_sup, double lambda, const Point& z) {
    MaxPrincipleBound b;
    const double D = barrier_denominator(nl, g_sup, lambda, z);
    if (!std::isfinite(D)) {
        b.infinite = true;
        b.sharp = b.envelope = std::numeric_limits<double>::infinity();
        return b;
    }
    double s2 = z.t;
    for (double x : z.x) s2 = std::min({s2, (1.0 + x) * (1.0 + x), (1.0 - x) * (1.0 - x)});
    b.sharp = 2.0 * D;
    b.envelope = std::max(nl.theta_inverse(1.0 / (lambda * lambda * s2)), nl.f_inverse(g_sup));
    b.constant = b.sharp / b.envelope;
    return b;
}

double remainder_bound_rhs(const Nonlinearity& nl, double g_sup, double w_sup, double R, double lambda) {
    if (!(R > 0.0 && R < 0.5)) throw std::invalid_argument("R must lie in (0, 1/2)");
    const double lr = lambda * R;
    return std::max({nl.theta_inverse(1.0 / (lr * lr)), nl.f_inverse(2.0 * g_sup), w_sup});
}

CommutatorResult commutator_field(const ScalarField& u, double m, double T, const IndexBox& region, double alpha) {
    const MollifierKernel k = make_kernel(T, u.box().d, u.grid());
    const IndexBox in = region.grow(k.max_lag, k.radius);
    if (!u.box().contains(in)) throw std::invalid_argument("insufficient support margin for the commutator");
    const ScalarField uin = u.restrict_to(in);
    ScalarField um = uin;
    for (double& v : um.values()) v = v * std::pow(std::abs(v), m - 1.0);
    const ScalarField uT = mollify(uin, k);
    const ScalarField umT = mollify(um, k);
    CommutatorResult r;
    r.field = ScalarField(u.grid(), uT.box());
    for (std::size_t p = 0; p < uT.size(); ++p) {
        const double a = uT.values()[p];
        r.field.values()[p] = a * std::pow(std::abs(a), m - 1.0) - umT.values()[p];
    }
    r.sup = sup_norm(r.field, region);
    r.u_sup = sup_norm(uin, in);
    HolderOptions opt;
    opt.max_distance = 2.0 * T;
    // Within 1% from below, so the bound can only come out smaller.
    opt.rel_tolerance = 0.01;
    r.local_holder = holder_seminorm(uin, alpha, in, opt);
    r.bound = 2.0 * m * std::pow(r.u_sup, m - 1.0) * std::pow(T, alpha) * r.local_holder;
    return r;
}

SchauderDetail schauder_ratio(const ScalarField& u, double alpha) {
    const IndexBox& B = u.box();
    const SpaceTimeGrid& g = u.grid();
    const int d = B.d;
    double umax = 0.0;
    for (double v : u.values()) umax = std::max(umax, std::abs(v));
    SchauderDetail out;
    if (umax == 0.0) return out;
    // Compact support: the field vanishes on every face of its box.
    bool faces_zero = true;
    for_each_node(B, [&](long n, const long* i) {
        bool face = n == B.n0 || n == B.n1;
        for (int k = 0; k < d; ++k) face = face || i[k] == B.i0[k] || i[k] == B.i1[k];
        if (face && std::abs(u.at(n, i)) > 1e-12 * umax) faces_zero = false;
    });
    if (!faces_zero) throw std::invalid_argument("field is not compactly supported in its box");

    IndexBox inner = B.shrink(1, 1);
    inner.n1 -= 1;
    const MollifierKernel k1 = make_kernel(1.0, d, g);
    IndexBox E = inner.grow(k1.max_lag, k1.radius);
    E.n1 += k1.max_lag;
    ScalarField f(g, E, 0.0);
    for_each_node(inner, [&](long n, const long* i) {
        std::array<long, kMaxDim> j{};
        for (int k = 0; k < d; ++k) j[k] = i[k];
        double lap = 0.0;
        for (int k = 0; k < d; ++k) {
            j[k] = i[k] + 1;
            const double up = u.at(n, j.data());
            j[k] = i[k] - 1;
            const double um = u.at(n, j.data());
            j[k] = i[k];
            lap += (up - 2.0 * u.at(n, i) + um) / (g.dx * g.dx);
        }
        const double ut = (u.at(n + 1, i) - u.at(n - 1, i)) / (2.0 * g.dt);
        f.at(n, i) = ut - lap;
    });
    for (double T : dyadic_scales(4.0 * g.dx)) {
        const ScalarField fT = mollify(f, make_kernel(T, d, g));
        out.forcing_norm = std::max(out.forcing_norm, std::pow(T, 2.0 - alpha) * sup_norm(fT, fT.box()));
    }
    out.holder = holder_seminorm(u, alpha, B);
    out.ratio = out.forcing_norm > 0.0 ? out.holder / out.forcing_norm : 0.0;
    return out;
}

BoundReport interpolation_check(const std::vector<double>& u, double dx, double alpha, double m) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
    if (u.size() < 3) throw std::invalid_argument("need at least three samples");
    double sup = 0.0, integral = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        sup = std::max(sup, std::abs(u[k]));
        const double w = (k == 0 || k + 1 == u.size()) ? 0.5 * dx : dx;
        integral += w * std::pow(std::abs(u[k]), m + 1.0);
    }
    const double lp = std::pow(integral, 1.0 / (m + 1.0));
    const double h = holder_seminorm_1d(u, dx, alpha, 2);
    const double e = alpha * (m + 1.0);
    BoundReport r;
    r.experiment = "interp";
    r.lhs = std::pow(0.5 * sup, 1.0 + e);
    r.rhs_terms = {{"holder", h * std::pow(lp, e)}, {"lebesgue", std::pow(lp, 1.0 + e)}};
    r.extra["sup"] = sup;
    r.extra["holder"] = h;
    r.extra["lp_norm"] = lp;
    r.finish();
    return r;
}

}  // namespace cdfi
