#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "cdfi/kernels.hpp"
#include "cdfi/noise.hpp"
#include "cdfi/norms.hpp"

using namespace cdfi;

namespace {

double weight_sum(const MollifierKernel& k) {
    double s = 0.0;
    for (double w : k.weights) s += w;
    return s;
}

// Random smooth field: a few space-time cosines.
ScalarField smooth_field(const SpaceTimeGrid& g, const IndexBox& box, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double a[3], kx[3], kt[3], ph[3];
    for (int j = 0; j < 3; ++j) {
        a[j] = u(rng);
        kx[j] = 4.0 * u(rng);
        kt[j] = 6.0 * u(rng);
        ph[j] = 3.0 * u(rng);
    }
    return ScalarField::from_function(g, box, [&](const Point& z) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += a[j] * std::cos(kx[j] * z.x[0] + kt[j] * z.t + ph[j]);
        return s;
    });
}

}  // namespace

TEST_CASE("kernel normalization and support") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 257);
    const MollifierKernel k1 = make_kernel(1.0, 1, g);
    CHECK(weight_sum(k1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(k1.mass - 1.0) < 1e-6);
    for (double w : k1.weights) CHECK(w >= 0.0);

    const MollifierKernel k = make_kernel(0.25, 1, g);
    long nonzero = 0;
    for (long a = 1; a <= k.max_lag; ++a)
        for (long b = -k.radius; b <= k.radius; ++b)
            if (k.weight(a, &b) > 0.0) {
                CHECK(parabolic_distance({a * g.dt, {b * g.dx}}, {0.0, {0.0}}) < k.T);
                ++nonzero;
            }
    CHECK(nonzero > 0);
    // Lags at or beyond T^2 and spatial offsets at or beyond T are not even stored.
    CHECK(k.max_lag * g.dt < 0.0625);
    CHECK(k.radius * g.dx < 0.25);
    CHECK_THROWS(make_kernel(2.0 * g.dx, 1, g));
}

TEST_CASE("kernel sup scales like T^-(d+2)") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 257);
    const double r = make_kernel(0.25, 1, g).sup_density() / make_kernel(1.0, 1, g).sup_density();
    CHECK(r == doctest::Approx(64.0).epsilon(0.05));
    // Oracle: the continuum profile at its centre is T-independent once rescaled.
    CHECK(make_kernel(1.0, 1, g).sup_density() == doctest::Approx(bump_profile(0.5, 0.0, 1)).epsilon(0.01));
}

TEST_CASE("continuum bump has unit mass") {
    // Independent Gauss-Kronrod quadrature of the profile over its support.
    using boost::math::quadrature::gauss_kronrod;
    const double mass = gauss_kronrod<double, 61>::integrate(
        [](double t) {
            const double half = std::sqrt(std::max(0.0, 1.0 - (2.0 * t - 1.0) * (2.0 * t - 1.0)));
            return gauss_kronrod<double, 61>::integrate([&](double x) { return bump_profile(t, x * x, 1); }, -half,
                                                         half, 8, 1e-12);
        },
        0.0, 1.0, 8, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mollify fixes constants and contracts") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const ScalarField five(g, g.full_box(), 5.0);
    const ScalarField m = mollify(five, 0.25);
    for (double v : m.values()) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));

    ScalarField spike(g, g.full_box(), 0.0);
    spike.at(40, 32) = 3.0;
    const ScalarField ms = mollify(spike, 0.25);
    double mx = 0.0;
    for (double v : ms.values()) mx = std::max(mx, v);
    CHECK(mx <= 3.0);
    CHECK(mx > 0.0);

    // (3.5) on random fields: sup over C of h_T <= sup over C + B(0,T) of h.
    for (int s = 0; s < 10; ++s) {
        const ScalarField h = smooth_field(g, g.full_box(), 100 + s);
        const MollifierKernel k = make_kernel(0.25, 1, g);
        const ScalarField hT = mollify(h, k);
        const IndexBox C = cylinder_region(0.3, g);
        CHECK(sup_norm(hT, C) <= sup_norm(h, C.grow(k.max_lag, k.radius).intersect(g.full_box())) + 1e-12);
    }
}

TEST_CASE("mollified linear field against the kernel moment") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 129);
    const ScalarField h = ScalarField::from_function(g, g.full_box(), [](const Point& z) { return z.x[0]; });
    const MollifierKernel k = make_kernel(0.125, 1, g);
    // First spatial moment by direct summation over the weights (convolution
    // reads h at x - b dx).
    double m1 = 0.0;
    for (long a = 1; a <= k.max_lag; ++a)
        for (long b = -k.radius; b <= k.radius; ++b) m1 += k.weight(a, &b) * (-b * g.dx);
    const ScalarField hT = mollify(h, k, ConvolutionMethod::direct);
    for_each_node(hT.box(), [&](long n, const long* i) {
        CHECK(hT.at(n, i) == doctest::Approx(g.x(i[0]) + m1).epsilon(1e-12).scale(1.0));
    });
    CHECK(std::abs(m1) < 1e-15);  // symmetric bump
}

TEST_CASE("fft and direct convolution agree") {
    for (int d : {1, 2}) {
        const SpaceTimeGrid g = SpaceTimeGrid::make(d, d == 1 ? 65 : 17);
        IndexBox box = g.full_box();
        ScalarField h(g, box);
        std::mt19937_64 rng(3);
        std::normal_distribution<double> nd;
        for (double& v : h.values()) v = nd(rng);
        const MollifierKernel k = make_kernel(0.5, d, g);
        const ScalarField a = mollify(h, k, ConvolutionMethod::direct);
        const ScalarField b = mollify(h, k, ConvolutionMethod::fft);
        REQUIRE(a.box() == b.box());
        double err = 0.0;
        for (std::size_t p = 0; p < a.size(); ++p) err = std::max(err, std::abs(a.values()[p] - b.values()[p]));
        CHECK(err < 1e-12);
        const MollifierPlan plan(k, g, box);
        const ScalarField c = plan.apply(h);
        for (std::size_t p = 0; p < a.size(); ++p) CHECK(c.values()[p] == doctest::Approx(a.values()[p]).scale(1.0));
    }
}

TEST_CASE("moment bound holds at the default resolution") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 257);
    for (double T : {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125})
        for (double alpha : {0.25, 0.49, 0.75}) {
            const MollifierKernel k = make_kernel(T, 1, g);
            CHECK(kernel_moment(k, alpha) <= std::pow(T, alpha) * 1.05);
        }
}

TEST_CASE("sup norm") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    CHECK(sup_norm(ScalarField(g, g.full_box(), -3.0), g.full_box()) == 3.0);
    const ScalarField h = ScalarField::from_function(g, g.full_box(), [](const Point& z) { return z.x[0]; });
    const double s = sup_norm(h, cylinder_region(0.25, g));
    CHECK(s < 0.75);
    CHECK(s >= 0.75 - g.dx);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    ScalarField r(g, g.full_box());
    for (double& v : r.values()) v = nd(rng);
    const IndexBox reg = cylinder_region(0.2, g);
    double brute = 0.0;
    for_each_node(reg, [&](long n, const long* i) { brute = std::max(brute, std::abs(r.at(n, i))); });
    CHECK(sup_norm(r, reg) == brute);
    CHECK_THROWS(sup_norm(r, g.full_box().grow(1, 1)));
}

TEST_CASE("holder seminorm") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 17);
    const IndexBox p0 = cylinder_region(0.0, g);
    CHECK(holder_seminorm(ScalarField(g, g.full_box(), 2.0), 0.5, p0) == 0.0);

    SUBCASE("linear field attains its maximum at full spatial separation") {
        const ScalarField h = ScalarField::from_function(g, g.full_box(), [](const Point& z) { return z.x[0]; });
        const double brute = holder_seminorm_brute(h, 0.5, p0);
        CHECK(holder_seminorm(h, 0.5, p0) == doctest::Approx(brute).epsilon(1e-14));
        CHECK(brute == doctest::Approx(std::sqrt(2.0 - 2.0 * g.dx)).epsilon(1e-12));
    }
    SUBCASE("branch and bound matches brute force on random fields") {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> nd;
        for (int s = 0; s < 5; ++s) {
            ScalarField h(g, g.full_box());
            for (double& v : h.values()) v = nd(rng);
            const IndexBox reg = cylinder_region(0.1, g);
            CHECK(holder_seminorm(h, 0.3, reg) == doctest::Approx(holder_seminorm_brute(h, 0.3, reg)));
            HolderOptions local;
            local.max_distance = 0.25;
            CHECK(holder_seminorm(h, 0.7, reg, local) ==
                  doctest::Approx(holder_seminorm_brute(h, 0.7, reg, local)));
            local.rel_tolerance = 0.01;
            const double approx = holder_seminorm(h, 0.7, reg, local);
            const double exact = holder_seminorm_brute(h, 0.7, reg, local);
            CHECK(approx <= exact * (1.0 + 1e-14));
            CHECK(approx * 1.01 >= exact);
        }
    }
    SUBCASE("monotone in the region") {
        const ScalarField h = smooth_field(g, g.full_box(), 4);
        CHECK(holder_seminorm(h, 0.5, cylinder_region(0.3, g)) <= holder_seminorm(h, 0.5, cylinder_region(0.1, g)));
    }
    SUBCASE("pairs closer than 2 dx are ignored") {
        ScalarField h(g, g.full_box(), 0.0);
        h.at(8, 8) = 1.0;
        HolderOptions all;
        all.min_distance = 1e-9;
        CHECK(holder_seminorm(h, 0.5, p0) < holder_seminorm(h, 0.5, p0, all));
        CHECK(holder_seminorm(h, 0.5, p0) == doctest::Approx(1.0 / std::sqrt(2.0 * g.dx)));
    }
    CHECK_THROWS(holder_seminorm(ScalarField(g, g.full_box()), 0.5, IndexBox{1, 3, 3, {4}, {4}}));
}

TEST_CASE("one-dimensional holder seminorm") {
    std::vector<double> v{0.0, 1.0, 0.0, 1.0};
    CHECK(holder_seminorm_1d(v, 1.0, 0.5, 1) == doctest::Approx(1.0));
    CHECK(holder_seminorm_1d(v, 1.0, 0.5, 2) == doctest::Approx(1.0 / std::sqrt(3.0)));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    std::vector<double> w(300);
    for (double& x : w) x = nd(rng);
    double brute = 0.0;
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = a + 1; b < w.size(); ++b)
            brute = std::max(brute, std::abs(w[a] - w[b]) / std::pow((b - a) * 0.01, 0.4));
    CHECK(holder_seminorm_1d(w, 0.01, 0.4, 1) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("negative norm") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const IndexBox p0 = cylinder_region(0.0, g);
    const IndexBox box = noise_box(g);
    CHECK(neg_holder_norm(ScalarField(g, box, 0.0), 0.49, p0) == 0.0);
    const NegNormEvaluator ev(g);
    const NegNormDetail c = ev.dyadic(ScalarField(g, box, 2.5), 0.49, p0);
    CHECK(c.value == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(c.argmax_T == 1.0);
    CHECK(c.t_floor == doctest::Approx(4.0 * g.dx));
    for (double T : c.scales) CHECK(T >= 4.0 * g.dx - 1e-15);

    SUBCASE("dyadic and dense scales agree within a factor 4 on white noise") {
        for (std::uint64_t s = 1; s <= 5; ++s) {
            const NoiseRealization z = sample_white_noise(g, s, box);
            const double dy = ev.dyadic(z.field, 0.49, p0).value;
            const double de = ev.dense(z.field, 0.49, p0, 64).value;
            CHECK(de / dy <= 4.0);
            CHECK(dy / de <= 4.0);
        }
    }
    SUBCASE("absolutely homogeneous") {
        const NoiseRealization z = sample_white_noise(g, 11, box);
        ScalarField twice = z.field;
        twice *= -2.0;
        CHECK(ev.dyadic(twice, 0.49, p0).value == doctest::Approx(2.0 * ev.dyadic(z.field, 0.49, p0).value));
    }
    CHECK_THROWS(ev.dyadic(ScalarField(g, g.full_box(), 1.0), 0.49, p0));
}

TEST_CASE("mollification error bound") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const IndexBox reg = cylinder_region(0.3, g);
    CHECK(mollification_error(ScalarField(g, g.full_box(), 1.0), 0.25, 0.5, reg).error ==
          doctest::Approx(0.0).scale(1.0));
    const ScalarField lin = ScalarField::from_function(g, g.full_box(), [](const Point& z) { return z.x[0]; });
    const MollificationError e = mollification_error(lin, 0.125, 1.0, reg);
    CHECK(e.error <= 0.125 + 1e-12);  // [x]_1 = 1 in the parabolic metric
    CHECK(e.error <= e.bound + 1e-12);
    const SpaceTimeGrid coarse = SpaceTimeGrid::make(1, 33);
    for (int s = 0; s < 20; ++s) {
        const ScalarField h = smooth_field(coarse, coarse.full_box(), 1000 + s);
        const MollificationError r = mollification_error(h, 0.25, 0.5, cylinder_region(0.3, coarse));
        CHECK(r.error <= r.bound);
    }
}
