#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <random>

#include "cdfi/experiments.hpp"

using namespace cdfi;

namespace {

// Least-squares slope of log(-log S) against log x that the tail fit converges
// to on an infinite sample: u uniform above q, x = F^{-1}(u). Substituting
// v = -log(1 - u) gives weights e^{-v} on v > -log(1 - q).
double population_tail_slope(double q, const std::function<double(double)>& x_of_survival) {
    const double v0 = -std::log1p(-q);
    const int n = 200000;
    const double h = 40.0 / n;
    double w = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        const double v = v0 + (k + 0.5) * h;
        const double wt = std::exp(-v) * h;
        const double x = std::log(x_of_survival(std::exp(-v)));
        const double y = std::log(v);
        w += wt;
        sx += wt * x;
        sy += wt * y;
        sxx += wt * x * x;
        sxy += wt * x * y;
    }
    const double mx = sx / w, my = sy / w;
    return (sxy / w - mx * my) / (sxx / w - mx * mx);
}

}  // namespace

TEST_CASE("tail exponent of a Weibull law is recovered") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double beta : {1.0, 2.0, 3.0}) {
        std::vector<double> s(100000);
        for (double& x : s) x = std::pow(-std::log(1.0 - u(rng)), 1.0 / beta);
        const TailFit f = estimate_tail_exponent(s, 0.95);
        CAPTURE(beta);
        CHECK(f.beta == doctest::Approx(beta).epsilon(0.03));
        CHECK(f.c == doctest::Approx(1.0).epsilon(0.1));
        CHECK(f.n_fit == 5000);
        CHECK(f.n_samples == 100000);
        CHECK(f.x_min < f.x_max);
    }
}

TEST_CASE("tail fit on half-normal samples matches the population least squares") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> nd;
    std::vector<double> s(100000);
    for (double& x : s) x = std::abs(nd(rng));
    for (double q : {0.9, 0.95, 0.99}) {
        const double oracle =
            population_tail_slope(q, [](double S) { return std::sqrt(2.0) * boost::math::erfc_inv(S); });
        CAPTURE(q);
        CAPTURE(oracle);
        // Exponent 2 is only reached far out; at these quantiles the fit is biased low.
        CHECK(oracle < 2.0);
        CHECK(estimate_tail_exponent(s, q).beta == doctest::Approx(oracle).epsilon(0.05));
    }
}

TEST_CASE("tail fit input validation") {
    CHECK_THROWS(estimate_tail_exponent(std::vector<double>(999, 1.0)));
    CHECK_THROWS(estimate_tail_exponent(std::vector<double>(2000, 1.0)));
    std::vector<double> ok(2000);
    for (std::size_t k = 0; k < ok.size(); ++k) ok[k] = 1.0 + static_cast<double>(k);
    CHECK_THROWS(estimate_tail_exponent(ok, 0.4));
    CHECK_THROWS(estimate_tail_exponent(ok, 0.9995));
    ok[3] = -1.0;
    CHECK_THROWS(estimate_tail_exponent(ok));
}

TEST_CASE("quantiles use linear interpolation") {
    const std::vector<double> q = quantiles({4.0, 1.0, 3.0, 2.0}, {0.0, 0.5, 1.0, 0.25});
    CHECK(q[0] == 1.0);
    CHECK(q[1] == doctest::Approx(2.5));
    CHECK(q[2] == 4.0);
    CHECK(q[3] == doctest::Approx(1.75));
}

TEST_CASE("integrability comparison") {
    TailFit a, b;
    a.beta = 3.1;
    b.beta = 2.9;
    const IntegrabilityReport r = compare_integrability(3.0, 0.49, a, b);
    CHECK(r.target == doctest::Approx(3.0));
    CHECK(r.predicted_sup == doctest::Approx(2.96));
    CHECK(r.predicted_holder == doctest::Approx(2.98));
    CHECK(r.passed());
    CHECK(compare_integrability(5.0, 0.49, a, b).target == doctest::Approx(4.0));
    b.beta = 2.4;
    CHECK_FALSE(compare_integrability(3.0, 0.49, a, b).passed());  // gap 0.7
    a.beta = 4.0;
    b.beta = 3.7;
    CHECK_FALSE(compare_integrability(3.0, 0.49, a, b).passed());  // out of band
}

TEST_CASE("invariant sampler without reweighting reproduces the bridge law") {
    InvariantOptions opt;
    opt.samples = 10000;
    opt.thin = 1;
    opt.burn_in = 200;
    opt.weighted = false;
    const int nx = 17;
    const InvariantSamples s = sample_invariant_measure(3.0, nx, 5, opt);
    REQUIRE(s.fields.size() == 10000);
    const double dx = 2.0 / (nx - 1);
    for (int i = 1; i < nx - 1; ++i) {
        double m1 = 0.0, m2 = 0.0;
        for (const auto& f : s.fields) {
            m1 += f[i];
            m2 += f[i] * f[i];
        }
        m1 /= s.fields.size();
        m2 /= s.fields.size();
        const double x = -1.0 + i * dx;
        CAPTURE(x);
        CHECK(m2 - m1 * m1 == doctest::Approx((1.0 - x * x) / 4.0).epsilon(0.05));
    }
    for (const auto& f : s.fields) CHECK((f.front() == 0.0 && f.back() == 0.0));
}

TEST_CASE("invariant sampler on three free nodes against quadrature") {
    // Target on R^3: N(0, (dx/2) L^{-1}) reweighted by exp(-2 dx sum |u|^4 / 4),
    // dx = 1/2, L = tridiag(-1, 2, -1). Compared through the middle node.
    const double dx = 0.5;
    const int n = 161;
    const double lo = -2.5, h = 5.0 / (n - 1);
    std::vector<double> marginal(n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double u1 = lo + a * h, u2 = lo + b * h, u3 = lo + c * h;
                const double quad = 2.0 * u1 * u1 + 2.0 * u2 * u2 + 2.0 * u3 * u3 - 2.0 * u1 * u2 - 2.0 * u2 * u3;
                const double pot = 2.0 * dx * (std::pow(u1, 4) + std::pow(u2, 4) + std::pow(u3, 4)) / 4.0;
                marginal[b] += std::exp(-0.5 * (2.0 / dx) * quad - pot);
            }
    std::vector<double> cdf(n, 0.0);
    for (int b = 1; b < n; ++b) cdf[b] = cdf[b - 1] + 0.5 * (marginal[b - 1] + marginal[b]);
    for (double& v : cdf) v /= cdf.back();
    std::vector<double> edges;
    for (int k = 1; k < 10; ++k) {
        const double p = 0.1 * k;
        int b = 1;
        while (cdf[b] < p) ++b;
        const double f = (p - cdf[b - 1]) / (cdf[b] - cdf[b - 1]);
        edges.push_back(lo + (b - 1 + f) * h);
    }

    InvariantOptions opt;
    opt.samples = 20000;
    opt.thin = 5;
    opt.burn_in = 2000;
    const InvariantSamples s = sample_invariant_measure(3.0, 5, 21, opt);
    // The weight is mild on three nodes, so even the largest step is accepted often.
    CHECK(s.step == doctest::Approx(1.0));
    CHECK(s.acceptance > 0.3);
    std::vector<double> counts(10, 0.0);
    for (const auto& f : s.fields) {
        const auto k = std::upper_bound(edges.begin(), edges.end(), f[2]) - edges.begin();
        counts[static_cast<std::size_t>(k)] += 1.0;
    }
    double tv = 0.0;
    for (double c : counts) tv += 0.5 * std::abs(c / s.fields.size() - 0.1);
    CAPTURE(tv);
    CHECK(tv < 0.02);
}

TEST_CASE("invariant sampler validation") {
    InvariantOptions short_chain;
    short_chain.samples = 100;
    short_chain.thin = 10;
    CHECK_THROWS(sample_invariant_measure(3.0, 17, 1, short_chain));
    CHECK_THROWS(sample_invariant_measure(1.0, 17, 1));
    CHECK_THROWS(sample_invariant_measure(3.0, 2, 1));
}

TEST_CASE("config validation lists every violation") {
    ExperimentConfig cfg;
    cfg.lambda = default_lambda(1);
    CHECK_NOTHROW(cfg.validate());
    cfg.nl.m = 1.0;
    cfg.ensemble = 0;
    try {
        cfg.validate();
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("m must exceed 1") != std::string::npos);
        CHECK(msg.find("ensemble must be at least 1") != std::string::npos);
    }
}

TEST_CASE("coming-down runs are reproducible") {
    ExperimentConfig cfg;
    cfg.nx = 33;
    cfg.ensemble = 2;
    cfg.magnitudes = {1.0, 1e3};
    cfg.lambda = default_lambda(1);
    const ComingDownSummary a = run_coming_down(cfg);
    const ComingDownSummary b = run_coming_down(cfg);
    REQUIRE(a.reports.size() == 2 * 2 * cfg.R.size());
    for (std::size_t k = 0; k < a.reports.size(); ++k) {
        CHECK(a.reports[k].lhs == b.reports[k].lhs);
        CHECK(a.reports[k].rhs == b.reports[k].rhs);
        CHECK(a.reports[k].seed == b.reports[k].seed);
        CHECK(std::isfinite(a.reports[k].ratio));
    }
    CHECK(a.all_finite);
    CHECK(a.max_ratio.size() == 2);

    const auto s1 = spde_sup_samples(cfg, 17, 4, 9, {0.5, 1.0});
    const auto s2 = spde_sup_samples(cfg, 17, 4, 9, {0.5, 1.0});
    CHECK(s1 == s2);
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].size() == 4);
}

TEST_CASE("nonlinearity spec and forcing") {
    NonlinearitySpec spec;
    spec.kind = "sinh";
    CHECK(spec.build().kind() == NonlinearityKind::sinh);
    spec.kind = "cubic";
    CHECK_THROWS(spec.build());
    CHECK_FALSE(static_cast<bool>(smooth_forcing(0.0)));
    const Forcing g = smooth_forcing(2.0);
    const double x[1] = {0.0};
    CHECK(g(0.0, x) == doctest::Approx(2.0));
}
