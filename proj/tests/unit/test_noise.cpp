#include <doctest.h>

#include <cmath>
#include <vector>

#include "cdfi/kernels.hpp"
#include "cdfi/noise.hpp"

using namespace cdfi;

namespace {

struct Moments {
    double mean = 0.0, var = 0.0, kurt = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double c = (x - m.mean) * (x - m.mean);
        m2 += c;
        m4 += c * c;
    }
    m2 /= static_cast<double>(v.size());
    m4 /= static_cast<double>(v.size());
    m.var = m2;
    m.kurt = m4 / (m2 * m2);
    return m;
}

// Variance of the mollified noise at a node, summed directly from the kernel
// weights and the spatial covariance of one time row.
double mollified_variance(const MollifierKernel& k, const SpaceTimeGrid& g, double (*cov)(long, double, double),
                          double lambda) {
    double acc = 0.0;
    for (long a = 1; a <= k.max_lag; ++a)
        for (long b = -k.radius; b <= k.radius; ++b)
            for (long c = -k.radius; c <= k.radius; ++c) acc += k.weight(a, &b) * k.weight(a, &c) * cov(b - c, lambda, g.dx);
    return acc / g.dt;
}

double white_cov(long lag, double, double dx) { return lag == 0 ? 1.0 / dx : 0.0; }
double colored_cov(long lag, double lambda, double dx) {
    return regularized_covariance(static_cast<double>(lag) * dx, lambda, dx);
}

}  // namespace

TEST_CASE("white noise node statistics") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const NoiseRealization z = sample_white_noise(g, 7);
    const Moments m = moments(z.field.values());
    const double target = 1.0 / (g.dt * g.dx);
    CHECK(m.var == doctest::Approx(target).epsilon(0.05));
    CHECK(std::abs(m.mean) < 5.0 * std::sqrt(target / static_cast<double>(z.field.size())));
    CHECK(m.kurt == doctest::Approx(3.0).epsilon(0.05));
    CHECK(z.clamped_mass == 0.0);
}

TEST_CASE("realizations are reproducible and box independent") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 33);
    const IndexBox big = noise_box(g);
    const IndexBox small = cylinder_region(0.25, g);
    for (const CovarianceSpec& spec : {CovarianceSpec{NoiseKind::white, 0.0}, CovarianceSpec{NoiseKind::colored, 0.5},
                                       CovarianceSpec{NoiseKind::colored_plus_dirac, 1.5}}) {
        CAPTURE(spec.name());
        const NoiseRealization a = sample_noise(g, spec, 3, big);
        const NoiseRealization b = sample_noise(g, spec, 3, big);
        CHECK(a.field.values() == b.field.values());
        const NoiseRealization c = sample_noise(g, spec, 3, small);
        for_each_node(small, [&](long n, const long* i) { CHECK(c.field.at(n, i) == a.field.at(n, i)); });
        const NoiseRealization other = sample_noise(g, spec, 4, big);
        CHECK(other.field.values() != a.field.values());
    }
    CHECK(sample_noise(g, {NoiseKind::none, 0.0}, 1, big).field.values() ==
          std::vector<double>(big.size(), 0.0));
}

TEST_CASE("colored covariance follows the regularized kernel") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const double lambda = 0.5;
    const NoiseRealization z = sample_colored_noise(g, {NoiseKind::colored, lambda}, 11);
    CHECK(z.clamped_mass < 0.1);
    const IndexBox box = z.field.box();
    auto cov = [&](long lag) {
        double s = 0.0;
        long cnt = 0;
        for (long n = box.n0; n <= box.n1; ++n)
            for (long i = box.i0[0]; i + lag <= box.i1[0]; ++i) {
                s += z.field.at(n, i) * z.field.at(n, i + lag);
                ++cnt;
            }
        return s / static_cast<double>(cnt) * g.dt;
    };
    for (long lag : {0L, 2L, 4L, 8L}) {
        CAPTURE(lag);
        CHECK(cov(lag) == doctest::Approx(regularized_covariance(lag * g.dx, lambda, g.dx)).epsilon(0.1));
    }
    CHECK(cov(4) / cov(8) == doctest::Approx(std::pow(2.0, lambda)).epsilon(0.1));
    const Moments m = moments(z.field.values());
    CHECK(m.kurt == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("mollified variance against the kernel sum") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const IndexBox box = noise_box(g);
    const long mid = (g.nx - 1) / 2;
    const std::vector<std::pair<long, std::vector<long>>> centers{
        {g.nt, {mid}}, {g.nt, {mid - 16}}, {g.nt, {mid + 16}}};
    const std::vector<double> scales{0.5, 0.25, 0.125};
    struct Case {
        CovarianceSpec spec;
        double (*cov)(long, double, double);
    };
    for (const Case& c : {Case{{NoiseKind::white, 0.0}, white_cov}, Case{{NoiseKind::colored, 0.5}, colored_cov}}) {
        CAPTURE(c.spec.name());
        const MomentScalingReport rep = noise_moment_scaling(
            g, c.spec, 400, [&](int k) { return sample_noise(g, c.spec, 1000 + k, box); }, scales, centers);
        std::vector<double> lx, ly;
        for (std::size_t k = 0; k < scales.size(); ++k) {
            const double exact = mollified_variance(make_kernel(scales[k], 1, g), g, c.cov, c.spec.lambda);
            CHECK(rep.variances[k] == doctest::Approx(exact).epsilon(0.15));
            lx.push_back(std::log(scales[k]));
            ly.push_back(std::log(exact));
        }
        // On this coarse grid the exact slope still carries the grid-scale
        // regularization, so the ensemble is compared with it.
        const double exact_slope = fit_slope(lx, ly);
        MESSAGE("slope ", rep.slope, " exact ", exact_slope, " asymptotic ", rep.expected_slope);
        CHECK(rep.slope == doctest::Approx(exact_slope).epsilon(0.05));
        CHECK(std::abs(exact_slope - rep.expected_slope) < 0.5);
        CHECK(rep.expected_slope == expected_variance_slope(c.spec, 1));
    }
}

TEST_CASE("spec validation and helpers") {
    CHECK(CovarianceSpec{NoiseKind::white, 0.0}.regularity_ceiling(1) == doctest::Approx(0.5));
    CHECK(CovarianceSpec{NoiseKind::colored, 0.5}.regularity_ceiling(2) == doctest::Approx(0.75));
    CHECK_THROWS(CovarianceSpec{NoiseKind::colored, 2.0}.validate(1));
    CHECK_THROWS(CovarianceSpec{NoiseKind::colored_plus_dirac, 0.5}.validate(1));
    CHECK_THROWS(sample_white_noise(SpaceTimeGrid::make(2, 17), 1));
    CHECK(regularized_covariance(0.0, 0.5, 0.25) == doctest::Approx(2.0));
    CHECK(regularized_covariance(-1.0, 0.5, 0.25) == doctest::Approx(1.0));
    CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0));
    CHECK(expected_variance_slope({NoiseKind::white, 0.0}, 1) == -3.0);
    CHECK(parse_noise_kind("colored") == NoiseKind::colored);
    CHECK_THROWS(parse_noise_kind("pink"));
}
