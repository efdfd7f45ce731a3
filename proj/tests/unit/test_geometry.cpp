#include <doctest.h>

#include <cmath>
#include <random>

#include "cdfi/geometry.hpp"

using namespace cdfi;

TEST_CASE("parabolic distance examples") {
    CHECK(parabolic_distance({0.0, {0.0}}, {0.0, {0.0}}) == 0.0);
    CHECK(parabolic_distance({1.0, {0.0}}, {0.0, {0.0}}) == doctest::Approx(1.0));
    CHECK(parabolic_distance({0.25, {0.4}}, {0.0, {0.0}}) == doctest::Approx(0.5));
    CHECK_THROWS(parabolic_distance({0.0, {0.0}}, {0.0, {0.0, 1.0}}));
}

TEST_CASE("parabolic distance is a metric on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        Point a{u(rng), {u(rng), u(rng)}}, b{u(rng), {u(rng), u(rng)}}, c{u(rng), {u(rng), u(rng)}};
        CHECK(parabolic_distance(a, b) == doctest::Approx(parabolic_distance(b, a)));
        CHECK(parabolic_distance(a, c) <= parabolic_distance(a, b) + parabolic_distance(b, c) + 1e-12);
        CHECK(parabolic_distance(a, a) == 0.0);
    }
}

TEST_CASE("ball membership looks into the past only") {
    CHECK(ball_membership({{1.0, {0.0}}, 1.0}, {0.5, {0.0}}));
    CHECK_FALSE(ball_membership({{1.0, {0.0}}, 1.0}, {1.5, {0.0}}));
    CHECK(ball_membership({{0.0, {0.0}}, 0.1}, {-0.005, {0.05}}));
    CHECK_FALSE(ball_membership({{0.0, {0.0}}, 0.1}, {-0.02, {0.0}}));  // sqrt(0.02) > 0.1
    CHECK_THROWS(ball_membership({{0.0, {0.0}}, 0.1}, {-0.005, {0.05, 0.0}}));
}

TEST_CASE("grid construction") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 257);
    CHECK(g.dx == doctest::Approx(1.0 / 128));
    CHECK(g.dt == doctest::Approx(1.0 / 16384));
    CHECK(g.nt == 16384);
    CHECK(g.dt == doctest::Approx(g.dx * g.dx));
    CHECK(g.x(0) == -1.0);
    CHECK(g.x(256) == doctest::Approx(1.0));
    CHECK(g.t(g.nt) == doctest::Approx(1.0));
    CHECK_THROWS(SpaceTimeGrid::make(1, 256));
    CHECK_THROWS(SpaceTimeGrid::make(4, 33));
}

TEST_CASE("cylinder regions") {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 257);
    SUBCASE("R = 0 is every interior node with t > 0") {
        const IndexBox b = cylinder_region(0.0, g);
        CHECK(b.n0 == 1);
        CHECK(b.n1 == g.nt);
        CHECK(b.i0[0] == 1);
        CHECK(b.i1[0] == 255);
    }
    SUBCASE("R = 1/2 in d = 1") {
        const IndexBox b = cylinder_region(0.5, g);
        CHECK(g.t(b.n0) > 0.25);
        CHECK(g.t(b.n0 - 1) <= 0.25 + 1e-15);
        CHECK(g.x(b.i0[0]) > -0.5);
        CHECK(g.x(b.i1[0]) < 0.5);
        CHECK(g.x(b.i0[0] - 1) <= -0.5 + 1e-12);
    }
    SUBCASE("nesting and monotone cardinality") {
        CHECK(cylinder_region(0.1, g).contains(cylinder_region(0.3, g)));
        std::size_t prev = cylinder_region(0.0, g).size();
        for (double R = 0.05; R < 0.5; R += 0.05) {
            const std::size_t s = cylinder_region(R, g).size();
            CHECK(s <= prev);
            prev = s;
        }
    }
    CHECK_THROWS(cylinder_region(0.5 + 1e-9, g));
    CHECK_THROWS(cylinder_region(-0.1, g));
}

TEST_CASE("shrunk inner cylinder stays inside the outer one") {
    // Every past node within parabolic distance R - R' of a node in P_R lies in P_R'.
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, 65);
    const double R = 0.3, Rp = 0.1;
    const IndexBox inner = cylinder_region(R, g), outer = cylinder_region(Rp, g);
    const double r = R - Rp;
    const long lag = static_cast<long>(std::floor(r * r / g.dt));
    const long rad = static_cast<long>(std::floor(r / g.dx));
    long checked = 0;
    for (long n = inner.n0; n <= inner.n1; n += 7)
        for (long i = inner.i0[0]; i <= inner.i1[0]; i += 3)
            for (long a = 0; a <= lag; ++a)
                for (long b = -rad; b <= rad; ++b) {
                    const Point z = g.point(n, &i);
                    const long j = i + b;
                    const Point w = g.point(n - a, &j);
                    if (parabolic_distance(z, w) >= r) continue;
                    long jj = j;
                    CHECK(outer.contains(n - a, &jj));
                    ++checked;
                }
    CHECK(checked > 1000);
}

TEST_CASE("index box algebra") {
    IndexBox b{1, 10, 20, {5}, {15}};
    CHECK(b.size() == 11 * 11);
    CHECK(b.shrink(2, 1) == IndexBox{1, 12, 20, {6}, {14}});
    CHECK(b.grow(2, 1) == IndexBox{1, 8, 20, {4}, {16}});
    CHECK(b.shrink(100, 0).empty());
    CHECK(b.intersect(IndexBox{1, 15, 30, {0}, {7}}) == IndexBox{1, 15, 20, {5}, {7}});
    long count = 0;
    for_each_node(b, [&](long, const long*) { ++count; });
    CHECK(count == 121);
}

TEST_CASE("cylinder membership") {
    const Cylinder c(0.25, 2);
    CHECK(c.contains({0.5, {0.0, 0.7}}));
    CHECK_FALSE(c.contains({0.05, {0.0, 0.0}}));
    CHECK_FALSE(c.contains({0.5, {0.0, 0.8}}));
    CHECK_THROWS(Cylinder(0.6, 1));
}
