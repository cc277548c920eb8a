#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bohm/analysis.hpp"
#include "bohm/errors.hpp"
#include "bohm/propagator.hpp"
#include "bohm/trajectory.hpp"
#include "oracles.hpp"

using namespace bohm;

namespace {

double endpoint_error(const GaussianParams& p, double tol, double t_end) {
    const AnalyticProvider prov(SuperpositionSpec::single(p));
    const std::vector<double> x0{-2.0, -0.5, 0.7, 1.9};
    const std::vector<double> times{0.0, t_end};
    IntegrationOptions opt;
    opt.rel_tol = tol;
    const auto ens = integrate_ensemble(prov, x0, times, opt);
    double e = 0;
    for (std::size_t i = 0; i < x0.size(); ++i)
        e = std::max(e, std::abs(ens.paths[i].back().x - closed_form_trajectory(p, x0[i], t_end)));
    return e;
}

std::vector<GridState> free_snapshots(const GaussianParams& p, double L, std::size_t n, double dt, std::size_t stride,
                                      std::size_t count) {
    GridState s = initialize_grid(SuperpositionSpec::single(p), GridGeometry::line(-L, L, n));
    const SpectralStepper stepper(s.geometry, s.units, dt);
    std::vector<GridState> out{s};
    for (std::size_t k = 1; k < count; ++k) {
        stepper.advance(s, FreePotential{}, stride);
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("linspace") {
    const auto v = linspace(0.0, 1.0, 5);
    REQUIRE(v.size() == 5);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 1.0);
    CHECK(v[2] == 0.5);
}

TEST_CASE("analytic-provider paths match the closed form within 10 tol") {
    const auto p = GaussianParams::line(1.0, 0.3, 0.8);
    const AnalyticProvider prov(SuperpositionSpec::single(p));
    const auto x0 = linspace(-2.5, 2.5, 11);
    const auto times = linspace(0.0, 10.0 * p.tau(), 101);
    const auto ens = integrate_ensemble(prov, x0, times);
    CHECK(ens.encounters.empty());
    double worst = 0;
    for (std::size_t i = 0; i < x0.size(); ++i)
        for (std::size_t k = 0; k < times.size(); ++k)
            worst = std::max(worst, std::abs(ens.paths[i][k].x - closed_form_trajectory(p, x0[i], times[k])));
    CHECK(worst < 10 * 1e-8);
    CHECK(ens.weights.size() == x0.size());
    CHECK(ens.weights[0] == doctest::Approx(1.0 / x0.size()));
}

TEST_CASE("halving the tolerance reduces the endpoint error") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.5);
    for (double tol : {1e-5, 3e-6, 1e-6, 3e-7, 1e-7, 3e-8, 1e-8, 3e-9, 1e-9, 1e-10}) {
        const double e1 = endpoint_error(p, tol, 20.0), e2 = endpoint_error(p, tol / 2, 20.0);
        CAPTURE(tol);
        CAPTURE(e1);
        CAPTURE(e2);
        CHECK(e1 / e2 >= 2.0);
    }
}

TEST_CASE("2D analytic integration separates per axis") {
    GaussianParams p;
    p.sigma0 = {1.0, 0.7};
    p.v0 = {0.4, -0.3};
    const AnalyticProvider prov(SuperpositionSpec::single(p, 2));
    const std::vector<Vec2> r0{{0.5, -0.2}, {-1.0, 0.9}};
    const auto times = linspace(0.0, 6.0, 13);
    const auto ens = integrate_ensemble(prov, r0, times);
    for (std::size_t i = 0; i < r0.size(); ++i) {
        const Vec2 want = closed_form_trajectory(p, r0[i], 6.0, 2);
        CHECK(ens.paths[i].back().x == doctest::Approx(want.x).epsilon(1e-7));
        CHECK(ens.paths[i].back().y == doctest::Approx(want.y).epsilon(1e-7));
    }
}

TEST_CASE("grid-provider paths match the closed form within 1e-3") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.5);
    const auto snaps = free_snapshots(p, 60.0, 2048, 0.01, 10, 201);  // t in [0, 20]
    const GridProvider prov(snaps);
    CHECK(prov.time_range().second == doctest::Approx(20.0));
    const auto x0 = linspace(-2.0, 2.0, 9);
    const auto times = linspace(0.0, 20.0, 41);
    const auto ens = integrate_ensemble(prov, x0, times);
    double worst = 0;
    for (std::size_t i = 0; i < x0.size(); ++i)
        for (std::size_t k = 0; k < times.size(); ++k)
            worst = std::max(worst, std::abs(ens.paths[i][k].x - closed_form_trajectory(p, x0[i], times[k])));
    CHECK(worst < 1e-3);
    CHECK_THROWS_AS(prov.velocity(Vec2{0.0, 0.0}, 25.0), ProviderRangeExceeded);
}

TEST_CASE("grid provider interpolates velocity") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.5);
    const auto snaps = free_snapshots(p, 30.0, 512, 0.01, 50, 3);
    const auto spec = SuperpositionSpec::single(p);
    for (auto mode : {Interpolation::bilinear, Interpolation::cubic}) {
        const GridProvider prov(snaps, mode);
        for (double x : {-1.3, 0.02, 2.71}) {
            const double want = field_sample(spec, x, 0.5).v->x;
            const auto got = prov.velocity(Vec2{x, 0.0}, 0.5);
            REQUIRE(got.has_value());
            CHECK(std::abs(got->x - want) < (mode == Interpolation::cubic ? 1e-4 : 1e-2));
        }
    }
}

TEST_CASE("early-time path is quadratic with a quartic remainder") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.0);
    const AnalyticProvider prov(SuperpositionSpec::single(p));
    const double tau = p.tau(), x0 = 1.5;
    const std::vector<double> times{0.0, 0.025 * tau, 0.05 * tau};
    IntegrationOptions opt;
    opt.rel_tol = 1e-13;
    const auto ens = integrate_ensemble(prov, std::vector<double>{x0}, times, opt);
    auto rem = [&](std::size_t k) {
        const double t = times[k];
        return std::abs(ens.paths[0][k].x - x0 - 0.5 * x0 / (tau * tau) * t * t);
    };
    CHECK(std::log2(rem(2) / rem(1)) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("nodal regions stop a path and are recorded") {
    // Two equal packets at rest: psi vanishes nowhere on the line except where
    // the interference is perfectly destructive, so force it with opposite weights.
    auto spec = SuperpositionSpec::counter_propagating(1.0, 3.0, 0.0);
    spec.components[1].weight = -1.0;
    const AnalyticProvider prov(spec);
    const auto ens = integrate_ensemble(prov, std::vector<double>{0.0, 2.0}, linspace(0.0, 1.0, 5));
    REQUIRE(ens.encounters.size() == 1);
    CHECK(ens.encounters[0].path == 0);
    CHECK_FALSE(ens.alive(0, 4));
    CHECK(std::isnan(ens.paths[0][4].x));
    CHECK(ens.alive(1, 4));
}

TEST_CASE("non-crossing check accepts ordered paths and flags a swap") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.2);
    const AnalyticProvider prov(SuperpositionSpec::single(p));
    const auto x0 = sample_initial_positions(initial_density(SuperpositionSpec::single(p)), 50);
    auto ens = integrate_ensemble(prov, x0, linspace(0.0, 10.0, 51));
    CHECK(check_noncrossing(ens).passed);

    // Swapping the positions of two neighbours at one time index is a crossing.
    std::swap(ens.paths[10][30], ens.paths[11][30]);
    const auto r = check_noncrossing(ens);
    CHECK_FALSE(r.passed);
    REQUIRE(r.first_violation.has_value());
    CHECK(r.first_violation->time_index == 30);
}

TEST_CASE("quantile sampling and CDF") {
    const auto spec = SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 0.0));
    const auto rho = initial_density(spec);
    const DensityCdf cdf(rho);
    CHECK(cdf.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cdf(0.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(cdf.quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-8));
    const auto x = sample_initial_positions(rho, 4);
    REQUIRE(x.size() == 4);
    CHECK(std::is_sorted(x.begin(), x.end()));
    CHECK(x[0] == doctest::Approx(-x[3]).epsilon(1e-9));
    CHECK(cdf(x[0]) == doctest::Approx(0.125).epsilon(1e-9));
    const DensityProfile1D zero{[](double) { return 0.0; }, -1.0, 1.0};
    CHECK_THROWS_AS(sample_initial_positions(zero, 5), UnnormalizableDensity);
}

TEST_CASE("product quantiles and rejection sampling") {
    const auto gx = initial_density(SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 0.0)));
    const auto gy = initial_density(SuperpositionSpec::single(GaussianParams::line(0.5, 2.0, 0.0)));
    const auto grid = sample_product_quantiles(gx, gy, 3, 5);
    CHECK(grid.size() == 15);
    auto rho = [](Vec2 r) { return std::exp(-0.5 * (r.x * r.x + r.y * r.y)); };
    const auto a = sample_rejection(rho, {-5, -5}, {5, 5}, 2000, 42);
    const auto b = sample_rejection(rho, {-5, -5}, {5, 5}, 2000, 42);
    CHECK(a.size() == 2000);
    CHECK(a[0] == b[0]);
    CHECK(a[1999] == b[1999]);
    double mx = 0, vx = 0;
    for (auto r : a) mx += r.x / 2000.0;
    for (auto r : a) vx += (r.x - mx) * (r.x - mx) / 2000.0;
    CHECK(std::abs(mx) < 0.1);
    CHECK(vx == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("quantile-sampled ensembles stay equivariant") {
    for (bool two : {false, true}) {
        const auto spec = two ? SuperpositionSpec::counter_propagating(1.0, 4.0, 0.3)
                              : SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 0.5));
        const AnalyticProvider prov(spec);
        const std::size_t n = 200;
        const auto x0 = sample_initial_positions(initial_density(spec), n);
        const std::vector<double> times{0.0, 2.0, 10.0};
        const auto ens = integrate_ensemble(prov, x0, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const DensityCdf cdf(initial_density(spec, times[k]));
            CHECK(ks_distance(ens.column(k), cdf) < 2.0 / std::sqrt(double(n)));
        }
    }
}

TEST_CASE("regime classification") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.0);  // tau = 2
    CHECK(classify_regime(p, 0.1) == Regime::huygens);
    CHECK(classify_regime(p, 2.0) == Regime::fresnel);
    CHECK(classify_regime(p, 30.0) == Regime::fraunhofer);
    CHECK(to_string(Regime::fresnel) == "fresnel");
}

TEST_CASE("asymptotic slope") {
    const auto p = GaussianParams::line(1.0, 0.0, 0.3);
    const AnalyticProvider prov(SuperpositionSpec::single(p));
    const auto ens = integrate_ensemble(prov, std::vector<double>{1.0, -2.0}, linspace(0.0, 200.0, 201));
    const auto s = asymptotic_slope(ens, 100.0, 200.0);
    CHECK(s[0] == doctest::Approx(0.3 + 1.0 / p.tau()).epsilon(1e-3));
    CHECK(s[1] == doctest::Approx(0.3 - 2.0 / p.tau()).epsilon(1e-3));
    CHECK_THROWS_AS(asymptotic_slope(ens, 150.0, 250.0), WindowOutOfRange);
    CHECK_THROWS_AS(asymptotic_slope(ens, 100.2, 100.8), WindowOutOfRange);
}

TEST_CASE("ensemble CSV export") {
    const AnalyticProvider prov(SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 1.0)));
    const auto ens = integrate_ensemble(prov, std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0});
    std::ostringstream out;
    write_ensemble_csv(out, ens);
    const std::string s = out.str();
    CHECK(s.rfind("path_id,t,x\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 5);
    CHECK(s.find("\n1,1,") != std::string::npos);
}
