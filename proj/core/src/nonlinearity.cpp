#include "cdfi/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/tools/roots.hpp>

namespace cdfi {

namespace ad = boost::math::differentiation;

namespace {

// f1 and f2 on u > 0, generic in the scalar type so autodiff can evaluate them.
template <class S>
S eval_f1(NonlinearityKind kind, double m, double a, const S& u) {
    using std::log, std::pow, std::sinh;
    switch (kind) {
        case NonlinearityKind::polynomial:
        case NonlinearityKind::polynomial_plus_bounded:
            return pow(u, m);
        case NonlinearityKind::sinh:
            return sinh(u);
        case NonlinearityKind::log_type:
        case NonlinearityKind::log_plain:
            return u * pow(log(1.0 + u), a);
    }
    return u;
}

template <class S>
S eval_f2(NonlinearityKind kind, double a, const S& u) {
    using std::log;
    if (kind == NonlinearityKind::log_type) {
        const S r = (1.0 + u) / (a * u);
        const S l = log(1.0 + u);
        return r * r * l * l;
    }
    return u * 0.0 + 1.0;
}

template <class S>
S eval_theta(NonlinearityKind kind, double m, double a, const S& u) {
    using std::log, std::pow, std::sinh;
    switch (kind) {
        case NonlinearityKind::polynomial:
        case NonlinearityKind::polynomial_plus_bounded:
            return pow(u, m - 1.0);
        case NonlinearityKind::sinh:
            return sinh(u) / u;
        case NonlinearityKind::log_type:
        case NonlinearityKind::log_plain:
            return pow(log(1.0 + u), a);
    }
    return u;
}

template <class F>
Derivs second_order(double u, F&& fn) {
    const auto x = ad::make_fvar<double, 2>(u);
    const auto y = fn(x);
    return {static_cast<double>(y.derivative(0)), static_cast<double>(y.derivative(1)),
            static_cast<double>(y.derivative(2))};
}

Derivs odd(Derivs d, bool negative) {
    if (negative) {
        d.v = -d.v;
        d.d2 = -d.d2;
    }
    return d;
}

double bisect_increasing(auto&& fn, double y, double lo, double hi_start) {
    double hi = hi_start;
    while (fn(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw std::domain_error("value outside the range of the map");
    }
    auto g = [&](double u) { return fn(u) - y; };
    const auto r = boost::math::tools::bisect(g, lo, hi, boost::math::tools::eps_tolerance<double>(44));
    return 0.5 * (r.first + r.second);
}

}  // namespace

Nonlinearity Nonlinearity::polynomial(double m) {
    if (!(m > 1.0)) throw std::invalid_argument("m must exceed 1");
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::polynomial;
    nl.m_ = m;
    return nl;
}

Nonlinearity Nonlinearity::polynomial_plus_bounded(double m, double g_sup) {
    Nonlinearity nl = polynomial(m);
    if (!(g_sup >= 0.0)) throw std::invalid_argument("g_sup must be nonnegative");
    nl.kind_ = NonlinearityKind::polynomial_plus_bounded;
    nl.g_sup_ = g_sup;
    return nl;
}

Nonlinearity Nonlinearity::sinh_type() {
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::sinh;
    return nl;
}

Nonlinearity Nonlinearity::log_type(double alpha_log) {
    if (!(alpha_log > 0.0)) throw std::invalid_argument("alpha_log must be positive");
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::log_type;
    nl.a_ = alpha_log;
    return nl;
}

Nonlinearity Nonlinearity::log_plain(double alpha_log) {
    Nonlinearity nl = log_type(alpha_log);
    nl.kind_ = NonlinearityKind::log_plain;
    return nl;
}

std::string Nonlinearity::name() const {
    switch (kind_) {
        case NonlinearityKind::polynomial: return "polynomial";
        case NonlinearityKind::polynomial_plus_bounded: return "polynomial_plus_bounded";
        case NonlinearityKind::sinh: return "sinh";
        case NonlinearityKind::log_type: return "log_type";
        case NonlinearityKind::log_plain: return "log_plain";
    }
    return "unknown";
}

double Nonlinearity::f1(double u) const {
    if (u == 0.0) return 0.0;
    const double a = std::abs(u);
    const double v = eval_f1(kind_, m_, a_, a);
    return u < 0 ? -v : v;
}

double Nonlinearity::f2(double u) const {
    const double a = std::abs(u);
    if (kind_ == NonlinearityKind::log_type && a == 0.0) return 1.0 / (a_ * a_);
    return eval_f2(kind_, a_, a);
}

double Nonlinearity::f(double u) const {
    if (kind_ == NonlinearityKind::log_type) {
        if (u == 0.0) return 0.0;
        const double a = std::abs(u);
        const double v = eval_f1(kind_, m_, a_, a) * eval_f2(kind_, a_, a);
        return u < 0 ? -v : v;
    }
    return f1(u);
}

Derivs Nonlinearity::f1_derivs(double u) const {
    const double a = std::abs(u);
    return odd(second_order(a, [&](const auto& x) { return eval_f1(kind_, m_, a_, x); }), u < 0);
}

Derivs Nonlinearity::f_derivs(double u) const {
    if (kind_ != NonlinearityKind::log_type) return f1_derivs(u);
    const double a = std::abs(u);
    return odd(second_order(a, [&](const auto& x) { return eval_f1(kind_, m_, a_, x) * eval_f2(kind_, a_, x); }),
               u < 0);
}

double Nonlinearity::theta(double u) const {
    if (!(u > 0.0)) throw std::domain_error("theta requires u > 0");
    return eval_theta(kind_, m_, a_, u);
}

Derivs Nonlinearity::theta_derivs(double u) const {
    if (!(u > 0.0)) throw std::domain_error("theta requires u > 0");
    return second_order(u, [&](const auto& x) { return eval_theta(kind_, m_, a_, x); });
}

double Nonlinearity::theta_floor() const { return kind_ == NonlinearityKind::sinh ? 1.0 : 0.0; }

double Nonlinearity::theta_inverse(double y) const {
    if (!std::isfinite(y)) throw std::domain_error("theta_inverse of a non-finite value");
    switch (kind_) {
        case NonlinearityKind::polynomial:
        case NonlinearityKind::polynomial_plus_bounded:
            if (y < 0.0) throw std::domain_error("value below the range of theta");
            return std::pow(y, 1.0 / (m_ - 1.0));
        case NonlinearityKind::log_type:
        case NonlinearityKind::log_plain:
            if (y < 0.0) throw std::domain_error("value below the range of theta");
            return std::expm1(std::pow(y, 1.0 / a_));
        case NonlinearityKind::sinh: {
            if (y < 1.0) throw std::domain_error("value below the range of theta");
            if (y == 1.0) return 0.0;
            auto th = [](double u) { return u < 1e-8 ? 1.0 + u * u / 6.0 : std::sinh(u) / u; };
            return bisect_increasing(th, y, 0.0, 1.0);
        }
    }
    return 0.0;
}

double Nonlinearity::f_inverse(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("f_inverse requires a nonnegative value");
    if (y == 0.0) return 0.0;
    return bisect_increasing([this](double u) { return f(u); }, y, 0.0, 1e8);
}

bool AssumptionReport::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.passed; });
}

const Condition* AssumptionReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

double barrier_probe_floor(const Nonlinearity& nl, double lambda) {
    return nl.theta_inverse(1.0 / (4.0 * lambda * lambda));
}

AssumptionReport check_assumptions(const Nonlinearity& nl, double u_max, int n_samples, double u_min) {
    if (!(u_max > 0.0)) throw std::invalid_argument("u_max must be positive");
    if (n_samples < 100) throw std::invalid_argument("need at least 100 samples");
    if (!(u_min > 0.0)) u_min = barrier_probe_floor(nl, default_lambda(1));
    // Families growing faster than doubles can hold (sinh) are certified up to
    // the overflow threshold.
    while (!std::isfinite(nl.f_derivs(u_max).d2 * u_max)) u_max *= 0.9;
    if (!(u_min < u_max)) throw std::invalid_argument("u_min must be below u_max");

    AssumptionReport rep;
    rep.assumption_set = nl.uses_split() ? "split" : "growth";
    rep.u_min = u_min;
    rep.u_max = u_max;

    std::vector<double> us(static_cast<std::size_t>(n_samples));
    const double l0 = std::log(u_min), l1 = std::log(u_max);
    for (int k = 0; k < n_samples; ++k) us[k] = std::exp(l0 + (l1 - l0) * k / (n_samples - 1));

    const double inf = std::numeric_limits<double>::infinity();
    double anti = inf, conv = inf, theta_inc = inf, f2_pos = inf, f2_dom = inf;
    std::vector<double> ratio(us.size());
    for (std::size_t k = 0; k < us.size(); ++k) {
        const double u = us[k];
        const Derivs fd = nl.f_derivs(u);
        const double scale = std::max(std::abs(fd.v), 1e-300);
        anti = std::min(anti, -std::abs(nl.f(-u) + nl.f(u)) / scale);
        const Derivs c = nl.uses_split() ? nl.f1_derivs(u) : fd;
        conv = std::min(conv, c.d2 / std::max(std::abs(c.v) / (u * u), 1e-300));
        theta_inc = std::min(theta_inc, nl.theta_derivs(u).d1);
        ratio[k] = u * fd.d1 / fd.v;
        if (nl.uses_split()) {
            const Derivs f1 = nl.f1_derivs(u);
            const double r1 = u * f1.d1 / f1.v - 1.0;
            const double f2 = nl.f2(u);
            f2_pos = std::min(f2_pos, f2);
            const double need = r1 > 0.0 ? std::max(1.0 / (r1 * r1), 1.0 / r1) : inf;
            f2_dom = std::min(f2_dom, (f2 - need) / f2);
        }
    }
    const double min_ratio = *std::min_element(ratio.begin(), ratio.end());

    // Limit of u f'/f as u -> infinity from a fit in 1 / log u over the upper half
    // of the grid; catches ratios that drift down to 1 beyond u_max.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t k = us.size() / 2; k < us.size(); ++k) {
        const double s = 1.0 / std::log(us[k]);
        sx += s;
        sy += ratio[k];
        sxx += s * s;
        sxy += s * ratio[k];
        cnt += 1;
    }
    const double den = cnt * sxx - sx * sx;
    const double slope = den != 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
    const double limit = (sy - slope * sx) / cnt;
    rep.certified_c = std::min(min_ratio, limit);

    const double tol = 1e-9;
    rep.conditions.push_back({"antisymmetry", anti >= -tol, anti});
    rep.conditions.push_back({nl.uses_split() ? "f1_convexity" : "convexity", conv >= -tol, conv});
    rep.conditions.push_back({"theta_increasing", theta_inc > 0.0, theta_inc});
    if (nl.uses_split()) {
        rep.conditions.push_back({"growth", min_ratio >= 1.0 - tol, min_ratio - 1.0});
        rep.conditions.push_back({"f2_positive", f2_pos > 0.0, f2_pos});
        rep.conditions.push_back({"f2_dominates", f2_dom >= -tol, f2_dom});
    } else {
        // c > 1 required on the grid and in the tail limit.
        const bool ok = min_ratio > 1.0 + tol && limit > 1.02;
        rep.conditions.push_back({"growth", ok, rep.certified_c - 1.0});
    }
    return rep;
}

double default_lambda(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    return 1.0 / std::sqrt(28.0 * d + 1.0);
}

double barrier_denominator(const Nonlinearity& nl, double g_sup, double lambda, const Point& z) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (z.t < 0.0) throw std::domain_error("point outside the domain");
    for (double x : z.x)
        if (std::abs(x) > 1.0) throw std::domain_error("point outside the domain");
    const double inf = std::numeric_limits<double>::infinity();
    if (z.t == 0.0) return inf;
    const double l2 = lambda * lambda;
    double D = nl.theta_inverse(1.0 / (l2 * z.t));
    for (double x : z.x) {
        if (std::abs(x) == 1.0) return inf;
        D += nl.theta_inverse(1.0 / (l2 * (1.0 + x) * (1.0 + x)));
        D += nl.theta_inverse(1.0 / (l2 * (1.0 - x) * (1.0 - x)));
    }
    return D + nl.f_inverse(g_sup);
}

double barrier_eta(const Nonlinearity& nl, double g_sup, double lambda, const Point& z) {
    const double D = barrier_denominator(nl, g_sup, lambda, z);
    return std::isfinite(D) ? 1.0 / D : 0.0;
}

namespace {

// phi(s) = Theta^{-1}(1 / (lambda^2 s^p)) with first and second derivative in s.
Derivs barrier_term(const Nonlinearity& nl, double lambda, double s, int p) {
    const double l2 = lambda * lambda;
    const double y = 1.0 / (l2 * std::pow(s, p));
    const double u = nl.theta_inverse(y);
    const Derivs th = nl.theta_derivs(u);
    const double h1 = 1.0 / th.d1;
    const double h2 = -th.d2 * h1 * h1 * h1;
    const double y1 = -p * y / s;
    const double y2 = p * (p + 1) * y / (s * s);
    return {u, h1 * y1, h2 * y1 * y1 + h1 * y2};
}

}  // namespace

BarrierReport verify_barrier_inequality(const Nonlinearity& nl, double lambda, const SpaceTimeGrid& grid,
                                        const BarrierOptions& opt) {
    const double fg = nl.f_inverse(opt.g_sup);
    const double band = opt.band * grid.dx;
    const long n_lo = std::max<long>(1, static_cast<long>(std::ceil(band * band / grid.dt - 1e-9)));
    const long i_lo = static_cast<long>(std::ceil(band / grid.dx - 1e-9));
    const long i_hi = grid.nx - 1 - i_lo;
    const int d = grid.d;

    // Separable pieces: D = T(n) + sum_k X(i_k) + f^{-1}(g).
    std::vector<Derivs> T(static_cast<std::size_t>(grid.nt + 2));
    for (long n = std::max<long>(1, n_lo - 1); n <= grid.nt + 1; ++n)
        T[static_cast<std::size_t>(n)] = barrier_term(nl, lambda, grid.t(n), 1);
    std::vector<Derivs> X(static_cast<std::size_t>(grid.nx));
    for (long i = 1; i < grid.nx - 1; ++i) {
        const Derivs a = barrier_term(nl, lambda, 1.0 + grid.x(i), 2);
        const Derivs b = barrier_term(nl, lambda, 1.0 - grid.x(i), 2);
        X[static_cast<std::size_t>(i)] = {a.v + b.v, a.d1 - b.d1, a.d2 + b.d2};
    }

    BarrierReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const double cap = fg > 0.0 ? 1.0 / fg : std::numeric_limits<double>::infinity();

    IndexBox box;
    box.d = d;
    box.n0 = n_lo;
    box.n1 = grid.nt;
    for (int k = 0; k < d; ++k) {
        box.i0[k] = i_lo;
        box.i1[k] = i_hi;
    }
    auto D_at = [&](long n, const long* i) {
        double D = T[static_cast<std::size_t>(n)].v + fg;
        for (int k = 0; k < d; ++k) D += X[static_cast<std::size_t>(i[k])].v;
        return D;
    };
    for_each_node(box, [&](long n, const long* i) {
        const double D = D_at(n, i);
        if (!std::isfinite(D) || !(1.0 / D > 0.0)) {
            ++rep.nodes_excluded;
            return;
        }
        double lhs = 0.0;
        if (opt.derivatives == BarrierDerivatives::analytic) {
            // With eta = 1/D the left side collapses to (Laplacian D - d_t D) / D.
            double lap = 0.0;
            for (int k = 0; k < d; ++k) lap += X[static_cast<std::size_t>(i[k])].d2;
            lhs = (lap - T[static_cast<std::size_t>(n)].d1) / D;
        } else {
            std::array<long, kMaxDim> j{};
            for (int k = 0; k < d; ++k) j[k] = i[k];
            const double e = 1.0 / D;
            const double et = (1.0 / D_at(n + 1, i) - 1.0 / D_at(n - 1, i)) / (2.0 * grid.dt);
            double lap = 0.0, grad2 = 0.0;
            for (int k = 0; k < d; ++k) {
                j[k] = i[k] + 1;
                const double ep = 1.0 / D_at(n, j.data());
                j[k] = i[k] - 1;
                const double em = 1.0 / D_at(n, j.data());
                j[k] = i[k];
                lap += (ep - 2.0 * e + em) / (grid.dx * grid.dx);
                const double g = (ep - em) / (2.0 * grid.dx);
                grad2 += g * g;
            }
            lhs = (et - lap) / e + 2.0 * grad2 / (e * e);
        }
        const double rhs = nl.f(D) / (2.0 * D);
        const double margin = (rhs - lhs) / rhs;
        ++rep.nodes_checked;
        if (!(margin >= 0.0)) ++rep.nodes_failed;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_point = grid.point(n, i);
        }
        if (1.0 / D > cap * (1.0 + 1e-12)) rep.eta_cap_holds = false;
    });
    return rep;
}

}  // namespace cdfi
