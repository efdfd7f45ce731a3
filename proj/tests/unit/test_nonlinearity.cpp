#include <doctest.h>

#include <cmath>

#include "cdfi/nonlinearity.hpp"

using namespace cdfi;

TEST_CASE("theta and its inverse on closed forms") {
    const Nonlinearity p = Nonlinearity::polynomial(3.0);
    CHECK(p.theta(2.0) == doctest::Approx(4.0));
    CHECK(p.theta_inverse(4.0) == doctest::Approx(2.0));
    CHECK(p.f(-2.0) == doctest::Approx(-8.0));
    CHECK(p.f_inverse(8.0) == doctest::Approx(2.0));
    CHECK(p.f_inverse(0.0) == 0.0);

    const Nonlinearity l = Nonlinearity::log_type(2.0);
    CHECK(l.theta(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
    CHECK(l.theta_inverse(4.0) == doctest::Approx(std::exp(2.0) - 1.0));
    CHECK(l.theta_inverse(4.0) == doctest::Approx(6.389).epsilon(1e-4));

    const Nonlinearity s = Nonlinearity::sinh_type();
    CHECK(s.theta(2.0) == doctest::Approx(std::sinh(2.0) / 2.0));
    CHECK(s.theta_inverse(std::sinh(2.0) / 2.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(s.theta_floor() == 1.0);
    CHECK_THROWS(s.theta_inverse(0.5));
    CHECK_THROWS(p.theta(0.0));
}

TEST_CASE("round trips, monotonicity and oddness") {
    for (const Nonlinearity& nl : {Nonlinearity::polynomial(3.0), Nonlinearity::polynomial(5.0),
                                   Nonlinearity::polynomial_plus_bounded(3.0, 0.5), Nonlinearity::sinh_type(),
                                   Nonlinearity::log_type(2.0), Nonlinearity::log_plain(2.0)}) {
        CAPTURE(nl.name());
        double prev = 0.0;
        for (double u = 0.01; u < 50.0; u *= 1.3) {
            const double th = nl.theta(u);
            CHECK(th > prev);
            prev = th;
            CHECK(nl.theta_inverse(th) == doctest::Approx(u).epsilon(1e-9));
            CHECK(nl.f(-u) == doctest::Approx(-nl.f(u)));
            CHECK(nl.f_inverse(nl.f(u)) == doctest::Approx(u).epsilon(1e-9));
            // Central differences as an oracle for the dual-number derivatives.
            const double h = 1e-5 * u;
            const Derivs dv = nl.theta_derivs(u);
            CHECK(dv.d1 == doctest::Approx((nl.theta(u + h) - nl.theta(u - h)) / (2.0 * h)).epsilon(1e-5));
        }
    }
}

TEST_CASE("split factors multiply to f") {
    const Nonlinearity l = Nonlinearity::log_type(2.0);
    for (double u : {0.1, 1.0, 10.0, 1e3}) {
        CHECK(l.f(u) == doctest::Approx(l.f1(u) * l.f2(u)));
        CHECK(l.f1(u) == doctest::Approx(u * std::pow(std::log1p(u), 2.0)));
        CHECK(l.theta(u) == doctest::Approx(l.f1(u) / u));
    }
}

TEST_CASE("assumption checks") {
    const AssumptionReport p = check_assumptions(Nonlinearity::polynomial(3.0));
    CHECK(p.passed());
    CHECK(p.assumption_set == "growth");
    CHECK(p.certified_c == doctest::Approx(3.0).epsilon(1e-6));

    const AssumptionReport l = check_assumptions(Nonlinearity::log_type(2.0));
    CHECK(l.assumption_set == "split");
    CHECK(l.passed());

    const AssumptionReport lp = check_assumptions(Nonlinearity::log_plain(2.0));
    CHECK_FALSE(lp.passed());

    CHECK(check_assumptions(Nonlinearity::sinh_type()).passed());
    CHECK(check_assumptions(Nonlinearity::polynomial_plus_bounded(3.0, 1.0)).passed());
    CHECK_THROWS(check_assumptions(Nonlinearity::polynomial(3.0), 1e8, 10));
}

TEST_CASE("barrier closed form") {
    const Nonlinearity p = Nonlinearity::polynomial(3.0);
    const double lambda = 1.0 / std::sqrt(29.0);
    CHECK(default_lambda(1) == doctest::Approx(lambda));
    CHECK(default_lambda(2) == doctest::Approx(1.0 / std::sqrt(57.0)));
    CHECK(default_lambda(3) == doctest::Approx(1.0 / std::sqrt(85.0)));
    const Point z{1.0, {0.0}};
    CHECK(barrier_denominator(p, 0.0, lambda, z) == doctest::Approx(3.0 * std::sqrt(29.0)));
    CHECK(barrier_eta(p, 0.0, lambda, z) == doctest::Approx(0.06190).epsilon(1e-4));
    CHECK(barrier_eta(p, 0.0, lambda, {0.0, {0.0}}) == 0.0);
    CHECK(barrier_eta(p, 0.0, lambda, {0.5, {1.0}}) == 0.0);
    // g enters through f^{-1}(g): with g = 8 the denominator grows by 2.
    CHECK(barrier_denominator(p, 8.0, lambda, z) == doctest::Approx(3.0 * std::sqrt(29.0) + 2.0));
    CHECK_THROWS(barrier_eta(p, 0.0, lambda, {0.5, {1.5}}));

    // eta decreases toward every face and is even in x.
    double prev = barrier_eta(p, 0.0, lambda, {0.5, {0.0}});
    for (double x = 0.1; x < 1.0; x += 0.1) {
        const double e = barrier_eta(p, 0.0, lambda, {0.5, {x}});
        CHECK(e < prev);
        CHECK(e == doctest::Approx(barrier_eta(p, 0.0, lambda, {0.5, {-x}})));
        prev = e;
    }
    for (double t = 0.9; t > 0.05; t -= 0.1)
        CHECK(barrier_eta(p, 0.0, lambda, {t, {0.0}}) < barrier_eta(p, 0.0, lambda, {t + 0.1, {0.0}}));
}

TEST_CASE("barrier inequality on the lattice") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 129);
    for (const Nonlinearity& nl : {Nonlinearity::polynomial(3.0), Nonlinearity::polynomial(5.0),
                                   Nonlinearity::sinh_type(), Nonlinearity::log_type(2.0)}) {
        CAPTURE(nl.name());
        const BarrierReport ok = verify_barrier_inequality(nl, default_lambda(1), g);
        CHECK(ok.passed());
        CHECK(ok.nodes_checked > 1000);
        CHECK(ok.worst_margin >= 0.0);
    }
    // Far too large a lambda breaks the supersolution property.
    const BarrierReport bad = verify_barrier_inequality(Nonlinearity::polynomial(3.0), 10.0 * default_lambda(1), g);
    CHECK_FALSE(bad.passed());
    CHECK(bad.nodes_failed > 0);

    BarrierOptions with_g;
    with_g.g_sup = 1.0;
    CHECK(verify_barrier_inequality(Nonlinearity::polynomial_plus_bounded(3.0, 1.0), default_lambda(1), g, with_g)
              .passed());
}
