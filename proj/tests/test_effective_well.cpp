#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bohm/effective_well.hpp"
#include "bohm/errors.hpp"

using namespace bohm;

namespace {

constexpr double pi = std::numbers::pi;

EffectiveWellParams well(double p0, double x0, double sigma0 = 1.0, double m = 1.0, double hbar = 1.0) {
    return EffectiveWellParams{GaussianParams::line(sigma0, 0.0, p0 / m, m, hbar), x0};
}

}  // namespace

TEST_CASE("width and depth at reference points") {
    const auto p = well(1.0, 0.0);
    CHECK(well_width(p, 0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(well_width(p, 2.0) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(well_depth(p, 0.0) == doctest::Approx(8.0 / (pi * pi)).epsilon(1e-15));
    // Doubling the width quarters the depth.
    CHECK(well_depth(p, 2.0) == doctest::Approx(well_depth(p, 0.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("degenerate and invalid wells are rejected") {
    CHECK_THROWS_AS(well(0.0, 0.0).validate(), DegenerateWell);
    CHECK_THROWS_AS(well_width(well(0.0, 0.0), 0.0), DegenerateWell);
    CHECK_THROWS_AS(well_depth(well(0.0, 0.0), 1.0), DegenerateWell);
    CHECK_THROWS_AS(well(-1.0, 3.0).validate(), InvalidParameter);
    CHECK_NOTHROW(well(0.0, 3.0).validate());
    // p0 = 0 with an offset is fine once t > 0.
    CHECK(well_width(well(0.0, 3.0), 1.0) > 0.0);
}

TEST_CASE("depth times width squared is 2 hbar^2 / m") {
    for (double m : {1.0, 2.5})
        for (double hbar : {1.0, 0.7})
            for (double p0 : {0.5, 1.0, 2.0})
                for (double x0 : {0.0, 4.0})
                    for (double t = 0.0; t <= 10.0; t += 0.5) {
                        const auto p = well(p0, x0, 1.2, m, hbar);
                        const double w = well_width(p, t);
                        CHECK(well_depth(p, t) * w * w == doctest::Approx(2 * hbar * hbar / m).epsilon(4e-16));
                    }
}

TEST_CASE("width grows like sigma_t^2 when x0 = 0") {
    for (double p0 : {0.5, 1.0, 2.0}) {
        const auto p = well(p0, 0.0, 1.3);
        const double ratio0 = well_width(p, 0.0) / std::pow(sigma_t(p.base, 0.0), 2);
        CHECK(ratio0 == doctest::Approx(pi / (2 * p0 * 1.3 * 1.3)).epsilon(1e-15));
        for (double t = 0.5; t <= 10.0; t += 0.5)
            CHECK(well_width(p, t) / std::pow(sigma_t(p.base, t), 2) == doctest::Approx(ratio0).epsilon(1e-14));
    }
}

TEST_CASE("width increases and depth decreases with time") {
    for (double p0 : {0.5, 1.0, 2.0})
        for (double x0 : {0.0, 5.0}) {
            const auto p = well(p0, x0);
            double w = well_width(p, 0.0);
            for (double t = 0.25; t <= 10.0; t += 0.25) {
                const double next = well_width(p, t);
                if (x0 == 0.0) CHECK(next > w);
                CHECK(well_depth(p, t) == doctest::Approx(2.0 / (next * next)));
                w = next;
            }
        }
    // Larger momentum gives a narrower, deeper well.
    CHECK(well_width(well(2.0, 0.0), 3.0) < well_width(well(1.0, 0.0), 3.0));
}

TEST_CASE("node potentials partition the line") {
    const auto p = well(1.0, 0.0);
    const auto g = GridGeometry::line(-8.0, 8.0, 160);
    const double t = 2.0;
    const double w = well_width(p, t), v0 = well_depth(p, t);
    const auto nodes = potential_on_grid(p, g, t);
    REQUIRE(nodes.values.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(0, i);
        const bool free = x < -w - 1e-12, inside = x >= -w - 1e-12 && x < 0.0 - 1e-12, wall = x >= -1e-12;
        CHECK(int(free) + int(inside) + int(wall) == 1);
        if (free) CHECK((nodes.values[i] == 0.0 && !nodes.wall[i]));
        if (inside) CHECK((nodes.values[i] == -v0 && !nodes.wall[i]));
        if (wall) CHECK(nodes.wall[i]);
    }
    CHECK(nodes.values[g.nearest(0, -2 * w)] == 0.0);
    CHECK(nodes.values[g.nearest(0, -w / 2)] == -v0);
    CHECK(nodes.wall[g.nearest(0, 0.1)]);

    const auto ablated = potential_on_grid(p, g, t, false);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(ablated.values[i] == 0.0);
        CHECK(ablated.wall[i] == nodes.wall[i]);
    }
    CHECK_THROWS_AS(potential_on_grid(p, GridGeometry::line(-8.05, 8.0, 160), t), InvalidParameter);
}

TEST_CASE("incident packet and its mirror image") {
    const auto p = well(0.5, 7.0);
    CHECK(p.incident().center.x == -7.0);
    CHECK(p.incident().v0.x == 0.5);
    const auto spec = p.mirrored_superposition();
    REQUIRE(spec.components.size() == 2);
    CHECK(spec.components[0].center.x == -7.0);
    CHECK(spec.components[1].center.x == 7.0);
    CHECK(spec.components[1].v0.x == -0.5);
}

TEST_CASE("comparison at t = 0 returns the incident packet twice") {
    const auto p = well(0.05, 15.0);
    const auto g = GridGeometry::line(-100.0, 100.0, 2048);
    const auto r = compare_with_superposition(p, g, 0.0);
    REQUIRE(r.x.size() == r.rho_well.size());
    double peak = 0, worst = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        CHECK(r.x[i] <= 0.0);
        peak = std::max(peak, r.rho_superposition[i]);
        worst = std::max(worst, std::abs(r.rho_well[i] - r.rho_superposition[i]));
    }
    CHECK(worst < 1e-8 * peak);
}
