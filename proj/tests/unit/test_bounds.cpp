#include <doctest.h>

#include <cmath>
#include <random>

#include "cdfi/bounds.hpp"
#include "cdfi/kernels.hpp"

using namespace cdfi;

TEST_CASE("ode and pde right-hand sides") {
    CHECK(ode_bound_rhs(3.0, 0.5, 1.0, 0.25) == doctest::Approx(2.0));
    // [w]^{1/(1 + 2 * 0.5)} = sqrt(100) beats t^{-1/2} = 2.
    CHECK(ode_bound_rhs(3.0, 0.5, 100.0, 0.25) == doctest::Approx(10.0));
    CHECK(ode_bound_terms(3.0, 0.5, 1.0, 0.25).size() == 2);

    CHECK(pde_bound_rhs(3.0, 0.5, 0.25, 0.0, 0.0) == doctest::Approx(4.0));
    CHECK(pde_bound_rhs(3.0, 0.5, 0.25, 0.0, 1000.0) == doctest::Approx(10.0));
    // Exponent 1 / (1 + (m-1) alpha / 2) = 2/3 for m = 3, alpha = 1/2.
    CHECK(pde_bound_rhs(3.0, 0.5, 0.25, 1000.0, 0.0) == doctest::Approx(100.0));
    CHECK(pde_bound_terms(3.0, 0.5, 0.25, 1.0, 1.0).size() == 3);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double m = 1.2 + 6.0 * u(rng), alpha = 0.05 + 0.9 * u(rng), R = 0.01 + 0.48 * u(rng);
        const double z = std::exp(10.0 * u(rng)), g = std::exp(10.0 * u(rng));
        CHECK(pde_bound_rhs(m, alpha, R, z, g) == doctest::Approx(pde_bound_rhs_alt(m, alpha, R, z, g)));
        // The noise term is homogeneous of degree 1/(1 + (m-1) alpha / 2).
        const double s = 1.0 + 3.0 * u(rng);
        const double t1 = pde_bound_terms(m, alpha, R, z, 0.0)[1].value;
        const double t2 = pde_bound_terms(m, alpha, R, s * z, 0.0)[1].value;
        CHECK(t2 / t1 == doctest::Approx(std::pow(s, 1.0 / (1.0 + (m - 1.0) * alpha / 2.0))));
    }
}

TEST_CASE("report finish") {
    BoundReport r;
    r.lhs = 3.0;
    r.rhs_terms = {{"a", 2.0}, {"b", 6.0}};
    r.finish();
    CHECK(r.rhs == 6.0);
    CHECK(r.ratio == doctest::Approx(0.5));
}

TEST_CASE("maximum principle constant") {
    const Nonlinearity p = Nonlinearity::polynomial(3.0);
    const double lambda = 1.0 / std::sqrt(29.0);
    const MaxPrincipleBound b = maxprinciple_bound(p, 0.0, lambda, {1.0, {0.0}});
    CHECK_FALSE(b.infinite);
    CHECK(b.sharp == doctest::Approx(6.0 * std::sqrt(29.0)));
    CHECK(b.sharp == doctest::Approx(32.31).epsilon(1e-4));
    CHECK(b.envelope == doctest::Approx(std::sqrt(29.0)));
    CHECK(b.constant == doctest::Approx(6.0));
    CHECK(maxprinciple_bound(p, 0.0, lambda, {0.0, {0.0}}).infinite);
    // The ratio stays bounded (by 2 (2d + 1)) over the interior.
    for (double t : {0.01, 0.2, 0.7})
        for (double x : {-0.9, -0.3, 0.0, 0.5, 0.95})
            CHECK(maxprinciple_bound(p, 0.0, lambda, {t, {x}}).constant <= 6.0 + 1e-12);
}

TEST_CASE("remainder right-hand side") {
    const Nonlinearity p = Nonlinearity::polynomial(3.0);
    const double lambda = 1.0 / std::sqrt(29.0);
    CHECK(remainder_bound_rhs(p, 0.0, 0.0, 0.25, lambda) == doctest::Approx(4.0 * std::sqrt(29.0)));
    CHECK(remainder_bound_rhs(p, 0.0, 100.0, 0.25, lambda) == 100.0);
    CHECK(remainder_bound_rhs(p, 1e6, 0.0, 0.25, lambda) == doctest::Approx(std::cbrt(2e6)));
    CHECK(remainder_bound_rhs(Nonlinearity::log_type(2.0), 0.0, 0.0, 0.25, lambda) ==
          doctest::Approx(std::expm1(4.0 * std::sqrt(29.0))));
    CHECK_THROWS(remainder_bound_rhs(p, 0.0, 0.0, 0.5, lambda));
}

TEST_CASE("commutator of a linear field against the second kernel moment") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const ScalarField u = ScalarField::from_function(g, g.full_box(), [](const Point& z) { return z.x[0]; });
    const double T = 0.25;
    const MollifierKernel k = make_kernel(T, 1, g);
    double m2 = 0.0;
    for (long a = 1; a <= k.max_lag; ++a)
        for (long b = -k.radius; b <= k.radius; ++b) m2 += k.weight(a, &b) * (b * g.dx) * (b * g.dx);
    const IndexBox region = cylinder_region(0.25, g);
    const CommutatorResult c = commutator_field(u, 3.0, T, region);
    // (x^3)_T = x^3 + 3 x m2 for a symmetric kernel, and x_T = x.
    for_each_node(region, [&](long n, const long* i) {
        CHECK(c.field.at(n, i) == doctest::Approx(-3.0 * g.x(i[0]) * m2).scale(1.0).epsilon(1e-10));
    });
    CHECK(c.sup <= c.bound);
    CHECK(c.local_holder == doctest::Approx(std::pow(2.0 * T, 0.5)).epsilon(0.011));

    ScalarField neg = u;
    neg *= -1.0;
    const CommutatorResult cn = commutator_field(neg, 3.0, T, region);
    for (std::size_t p = 0; p < c.field.size(); ++p)
        CHECK(cn.field.values()[p] == doctest::Approx(-c.field.values()[p]).scale(1.0));
}

TEST_CASE("schauder ratio") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    IndexBox box = g.full_box();
    CHECK(schauder_ratio(ScalarField(g, box, 0.0), 0.5).ratio == 0.0);
    CHECK_THROWS(schauder_ratio(ScalarField(g, box, 1.0), 0.5));
    auto bump = [](const Point& z) {
        const double r2 = ((z.t - 0.5) * (z.t - 0.5) / 0.0625 + z.x[0] * z.x[0] / 0.25);
        return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    const ScalarField u = ScalarField::from_function(g, box, bump);
    const SchauderDetail s = schauder_ratio(u, 0.5);
    CHECK(s.ratio > 0.0);
    CHECK(s.ratio < 2.0);
    CHECK(s.holder > 0.0);
    ScalarField u3 = u;
    u3 *= 3.0;
    CHECK(schauder_ratio(u3, 0.5).ratio == doctest::Approx(s.ratio));
}

TEST_CASE("interpolation inequality") {
    // Constant field: sup c, L^{m+1} norm 2^{1/(m+1)} c, no Hölder term.
    const std::vector<double> c(129, 2.0);
    const BoundReport r = interpolation_check(c, 2.0 / 128.0, 0.25, 3.0);
    CHECK(r.extra.at("holder") == 0.0);
    CHECK(r.extra.at("lp_norm") == doctest::Approx(std::pow(2.0, 0.25) * 2.0));
    CHECK(r.ratio == doctest::Approx(0.25 / std::sqrt(2.0)));

    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 50; ++k) {
        std::vector<double> v(257);
        double acc = 0.0;
        for (double& x : v) x = acc += nd(rng) * 0.1;
        CHECK(interpolation_check(v, 2.0 / 256.0, 0.3, 3.0).ratio <= 1.0);
    }
    CHECK_THROWS(interpolation_check(c, 0.1, 0.5, 3.0));
}
