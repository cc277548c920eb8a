// Acceptance run: one PASS/FAIL line per criterion.  Exit status is the
// number of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bohm/analysis.hpp"
#include "bohm/analytic_wave.hpp"
#include "bohm/effective_well.hpp"
#include "bohm/grid_fields.hpp"
#include "bohm/propagator.hpp"
#include "bohm/scenario.hpp"
#include "bohm/trajectory.hpp"
#include "oracles.hpp"

using namespace bohm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {b, (sy - b * sx) / n};
}

// 1. Spreading law on the grid.
Outcome spreading_law() {
    const auto t0 = std::chrono::steady_clock::now();
    GridState s = initialize_grid(SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 0.0)),
                                  GridGeometry::line(-40.0, 40.0, 1024));
    const SpectralStepper stepper(s.geometry, s.units, 1e-3);
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {  // t = 0, 0.1, ..., 10
        const double sigma = std::sqrt(axis_moments(s.geometry, s.density()).variance);
        worst = std::max(worst, std::abs(sigma / oracle::sigma_t(0.1 * k, 1.0) - 1.0));
        if (k < 100) stepper.advance(s, FreePotential{}, 100);
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-3 && secs < 30.0, fmt("max relative sigma error %.2e (limit 1e-3), %.1f s", worst, secs)};
}

// 2. Closed-form trajectory oracle, analytic and grid providers.
Outcome trajectory_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = GaussianParams::line(1.0, 0.0, 0.5);
    const auto spec = SuperpositionSpec::single(p);
    const double t_end = 10.0 * p.tau();
    const auto x0 = sample_initial_positions(initial_density(spec), 20);
    const auto times = linspace(0.0, t_end, 201);
    IntegrationOptions opt;
    opt.rel_tol = 1e-8;

    auto worst_error = [&](const TrajectoryEnsemble& ens) {
        double e = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i)
            for (std::size_t k = 0; k < times.size(); ++k)
                e = std::max(e, std::abs(ens.paths[i][k].x - closed_form_trajectory(p, x0[i], times[k])));
        return e;
    };
    const double e_analytic = worst_error(integrate_ensemble(AnalyticProvider(spec), x0, times, opt));

    GridState s = initialize_grid(spec, GridGeometry::line(-120.0, 120.0, 2048));
    const SpectralStepper stepper(s.geometry, s.units, 0.01);
    std::vector<GridState> snaps{s};
    for (int k = 0; k < 400; ++k) {  // snapshots every 0.05
        stepper.advance(s, FreePotential{}, 5);
        snaps.push_back(s);
    }
    const double e_grid = worst_error(integrate_ensemble(GridProvider(snaps), x0, times, opt));
    const double secs = seconds_since(t0);
    return {e_analytic < 1e-6 && e_grid < 1e-3 && secs < 60.0,
            fmt("analytic %.2e (limit 1e-6), grid %.2e (limit 1e-3), %.1f s", e_analytic, e_grid, secs)};
}

// 3. Asymptotic slopes.
Outcome asymptotic_slopes() {
    const auto p = GaussianParams::line(1.0, 0.0, 0.0);
    const double tau = p.tau();
    const std::vector<double> x0{-2.0, -1.0, 1.0, 2.0};
    const auto ens = integrate_ensemble(AnalyticProvider(SuperpositionSpec::single(p)), x0,
                                        linspace(0.0, 100.0 * tau, 401));
    const auto slopes = asymptotic_slope(ens, 50.0 * tau, 100.0 * tau);
    double worst = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double expect = p.v0.x + x0[i] / tau;
        worst = std::max(worst, std::abs(slopes[i] / expect - 1.0));
    }
    return {worst < 0.01, fmt("max relative slope error %.2e (limit 1e-2)", worst)};
}

// 4. Early-time power law.
Outcome early_time_law() {
    const auto p = GaussianParams::line(1.0, 0.0, 0.0);
    const double tau = p.tau(), x0 = 1.0;
    std::vector<double> times{0.0};
    for (int k = 1; k <= 20; ++k) times.push_back(0.05 * tau * k / 20.0);
    IntegrationOptions opt;
    opt.rel_tol = 1e-12;
    const auto ens = integrate_ensemble(AnalyticProvider(SuperpositionSpec::single(p)), std::vector<double>{x0},
                                        times, opt);
    std::vector<double> lx, ly;
    for (std::size_t k = 1; k < times.size(); ++k) {
        lx.push_back(std::log(times[k]));
        ly.push_back(std::log(ens.paths[0][k].x - x0));
    }
    const auto [exponent, intercept] = linear_fit(lx, ly);
    const double coeff = std::exp(intercept), expect = x0 / (2.0 * tau * tau);
    const double coeff_err = std::abs(coeff / expect - 1.0);
    return {std::abs(exponent - 2.0) <= 0.05 && coeff_err <= 0.02,
            fmt("exponent %.4f (2 +- 0.05), coefficient %.5f vs %.5f (%.2e, limit 2e-2)", exponent, coeff, expect,
                coeff_err)};
}

// 5. Non-crossing in the collision and interference regimes.
Outcome non_crossing() {
    std::string detail;
    bool ok = true;
    for (double ratio : {10.0, 0.1}) {
        const double vs = 0.5;  // hbar / (2 m sigma0)
        const auto spec = SuperpositionSpec::counter_propagating(1.0, 10.0, ratio * vs);
        const double t_end = ratio > 1.0 ? 8.0 : 40.0;
        const auto x0 = sample_initial_positions(initial_density(spec), 50);
        const auto ens = integrate_ensemble(AnalyticProvider(spec), x0, linspace(0.0, t_end, 401));
        const auto r = check_noncrossing(ens);
        ok = ok && r.passed;
        detail += fmt("%sv0/vs=%g: %s (%zu nodal stops)", detail.empty() ? "" : "; ", ratio,
                      r.passed ? "order preserved" : "crossing", ens.encounters.size());
    }
    return {ok, detail};
}

// 6. Equivariance.
Outcome equivariance() {
    std::string detail;
    bool ok = true;
    for (bool two : {false, true}) {
        const auto spec = two ? SuperpositionSpec::counter_propagating(1.0, 4.0, 0.25)
                              : SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 0.5));
        const double tau = spec.components[0].tau();
        const auto x0 = sample_initial_positions(initial_density(spec), 400);
        const std::vector<double> times{0.0, tau, 5.0 * tau};
        const auto ens = integrate_ensemble(AnalyticProvider(spec), x0, times);
        for (std::size_t k = 1; k < times.size(); ++k) {
            const double d = ks_distance(ens.column(k), DensityCdf(initial_density(spec, times[k])));
            ok = ok && d < 0.1;
            detail += fmt("%s%s t=%gtau KS %.4f", detail.empty() ? "" : ", ", two ? "two-packet" : "free",
                          times[k] / tau, d);
        }
    }
    return {ok, detail + " (limit 0.1)"};
}

// 7. Interference assembly against direct evaluation.
Outcome assembly() {
    auto spec = SuperpositionSpec::counter_propagating(1.0, 6.0, 0.3);
    spec.components[1].weight = {0.8, 0.35};
    double worst_rho = 0.0, worst_j = 0.0;
    std::size_t used = 0;
    for (double t : {0.0, 2.0, 10.0, 25.0, 60.0})
        for (int i = 0; i < 2048; ++i) {
            const double x = -60.0 + 120.0 * i / 2047.0;
            const cplx psi = evaluate_psi(spec, x, t);
            const double rho = std::norm(psi);
            if (!(rho > 1e-12)) continue;
            const auto d = evaluate_derivatives(spec, Vec2{x, 0.0}, t);
            const double J = spec.hbar() / spec.mass() * (std::conj(psi) * d.grad_x).imag();
            const auto a = assemble_two_component(spec, Vec2{x, 0.0}, t);
            worst_rho = std::max(worst_rho, std::abs(a.rho - rho) / a.rho_scale);
            worst_j = std::max(worst_j, std::abs(a.J.x - J) / std::max(a.J_scale, 1e-300));
            ++used;
        }
    return {worst_rho <= 1e-10 && worst_j <= 1e-10,
            fmt("rho %.2e, J %.2e relative to term magnitudes (limit 1e-10), %zu points", worst_rho, worst_j, used)};
}

// 8. Effective well versus two-packet superposition.
Outcome effective_well() {
    const auto t0 = std::chrono::steady_clock::now();
    const EffectiveWellParams p{GaussianParams::line(1.0, 0.0, 0.05), 15.0};
    const auto r = compare_with_superposition(p, GridGeometry::line(-100.0, 100.0, 2048), 30.0);
    const double secs = seconds_since(t0);
    const double ratio_s = r.fringes_superposition.innermost_ratio.value_or(NAN);
    const double ratio_w = r.fringes_well.innermost_ratio.value_or(NAN);
    return {r.passed() && secs < 120.0,
            fmt("peaks %zu/%zu, max position offset %.3f vs cell %.3f (%s), innermost ratio %.3f / %.3f (%s/%s), %.1f s",
                r.fringes_superposition.peaks.size(), r.fringes_well.peaks.size(), r.max_position_offset,
                r.grid_spacing, r.positions_agree ? "agree" : "disagree", ratio_s, ratio_w,
                r.half_width_superposition ? "ok" : "out", r.half_width_well ? "ok" : "out", secs)};
}

// 9. Well identities.
Outcome well_identities() {
    double worst_identity = 0.0, worst_initial = 0.0;
    for (double p0 : {0.5, 1.0, 2.0}) {
        const EffectiveWellParams p{GaussianParams::line(1.0, 0.0, p0), 0.0};
        for (int k = 0; k <= 100; ++k) {
            const double w = well_width(p, 0.1 * k);
            worst_identity = std::max(worst_identity, std::abs(well_depth(p, 0.1 * k) * w * w / 2.0 - 1.0));
        }
        worst_initial = std::max(worst_initial, std::abs(well_width(p, 0.0) / (std::numbers::pi / (2.0 * p0)) - 1.0));
    }
    const double eps = 4.0 * std::numeric_limits<double>::epsilon();
    return {worst_identity <= eps && worst_initial <= eps,
            fmt("V0 w^2 = 2 hbar^2/m to %.1e, w(0) = pi hbar/2p0 to %.1e (limit %.1e)", worst_identity, worst_initial,
                eps)};
}

// 10. Continuity residual convergence in dt, on the free-packet run of
// criterion 1 (dt = 1e-3 halved twice), one step taken from t = 1.
Outcome continuity() {
    const auto spec = SuperpositionSpec::single(GaussianParams::line(1.0, 0.0, 0.0));
    const GridState start = initialize_grid(spec, GridGeometry::line(-40.0, 40.0, 1024));
    std::vector<double> res;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) {
        const SpectralStepper stepper(start.geometry, start.units, dt);
        GridState prev = start;
        stepper.advance(prev, FreePotential{}, std::size_t(std::llround(1.0 / dt)));
        const GridState next = stepper.step(prev, FreePotential{});
        res.push_back(continuity_residual(prev, next));
    }
    const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
    return {o1 >= 2.0 && o2 >= 2.0,
            fmt("residuals %.4e %.4e %.4e, observed orders %.6f %.6f (need >= 2)", res[0], res[1], res[2], o1, o2)};
}

// 11. Vortex quantization in the 2D reaction scenario.
Outcome vortices() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c = default_config(ScenarioKind::reaction_2d);
    const auto dir = std::filesystem::temp_directory_path() / "bohm_acceptance_reaction";
    std::filesystem::remove_all(dir);
    c.outputs.directory = dir.string();
    c.outputs.formats = {"json"};
    const ScenarioResult r = run_scenario(c);
    std::filesystem::remove_all(dir);
    const double secs = seconds_since(t0);
    std::size_t total = 0;
    bool integer = true;
    for (const auto& snap : r.report["vortex_snapshots"])
        for (const auto& v : snap["vortices"]) {
            ++total;
            integer = integer && v["winding"].is_number_integer() && v["winding"].get<int>() != 0;
        }
    const auto& checks = r.report["checks"];
    const bool ok = checks["circulation_quantized"] && checks["no_vortices_before_arrival"] &&
                    checks["vortices_in_overlap_window"] && integer && secs < 300.0;
    return {ok, fmt("%zu detections, max circulation error %.2e (limit 1e-2), none before t=%.2f: %s, %.1f s", total,
                    r.report["max_relative_circulation_error"].get<double>(), r.report["arrival_time"].get<double>(),
                    checks["no_vortices_before_arrival"].get<bool>() ? "yes" : "no", secs)};
}

// 12. Collision versus interference classification.
Outcome classification() {
    const double vs = 0.5, t = 40.0;
    std::vector<double> x;
    for (int i = 0; i <= 30000; ++i) x.push_back(-300.0 + 600.0 * i / 30000.0);
    std::string detail;
    DensityPattern got[2];
    int idx = 0;
    for (double ratio : {10.0, 0.1}) {
        const auto spec = SuperpositionSpec::counter_propagating(1.0, 10.0, ratio * vs);
        std::vector<double> rho;
        for (double v : x) rho.push_back(std::norm(evaluate_psi(spec, v, t)));
        const auto r = classify_pattern(x, rho, sigma_t(spec.components[0], t));
        got[idx++] = r.pattern;
        detail += fmt("%sv0/vs=%g -> %s (%zu peaks)", detail.empty() ? "" : ", ", ratio, to_string(r.pattern).c_str(),
                      r.peak_count);
    }
    return {got[0] == DensityPattern::separated_lobes && got[1] == DensityPattern::fringes, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"spreading law on the grid", spreading_law},
        {"closed-form trajectory oracle", trajectory_oracle},
        {"asymptotic slope", asymptotic_slopes},
        {"early-time law", early_time_law},
        {"non-crossing", non_crossing},
        {"equivariance", equivariance},
        {"superposition assembly", assembly},
        {"effective-well equivalence", effective_well},
        {"well identities", well_identities},
        {"continuity convergence", continuity},
        {"vortex quantization", vortices},
        {"collision vs interference", classification},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed;
}
