#include "bohm/scenario.hpp"

#include <fftw3.h>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "bohm/analysis.hpp"
#include "bohm/analytic_wave.hpp"
#include "bohm/effective_well.hpp"
#include "bohm/grid.hpp"
#include "bohm/grid_fields.hpp"
#include "bohm/propagator.hpp"
#include "bohm/svg.hpp"
#include "bohm/trajectory.hpp"

namespace bohm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Config parsing helpers

template <class T>
void read(const json& obj, const char* key, T& dest, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        dest = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : obj.items())
        if (std::none_of(keys.begin(), keys.end(), [&](const char* known) { return k == known; }))
            throw ConfigError("unknown key " + where + "." + k);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Output bookkeeping

class Outputs {
public:
    Outputs(const ScenarioConfig& cfg, ScenarioResult& result) : cfg_(cfg), result_(result) {
        dir_ = cfg.outputs.directory;
        fs::create_directories(dir_);
    }

    bool wants(const std::string& f) const { return cfg_.wants(f); }

    std::ofstream open(const fs::path& rel) {
        const fs::path full = dir_ / rel;
        if (full.has_parent_path()) fs::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        if (!out) throw Error("cannot open " + full.string() + " for writing");
        result_.artifacts.push_back(rel);
        return out;
    }

    void svg(const fs::path& rel, const SvgPlot& plot) {
        if (!wants("svg")) return;
        open(rel) << plot.str();
    }

    void report_json(const fs::path& rel, const json& doc) {
        if (!wants("json")) return;
        open(rel) << doc.dump(2) << "\n";
    }

    fs::path path(const fs::path& rel) {
        const fs::path full = dir_ / rel;
        if (full.has_parent_path()) fs::create_directories(full.parent_path());
        result_.artifacts.push_back(rel);
        return full;
    }

    const fs::path& dir() const { return dir_; }

private:
    const ScenarioConfig& cfg_;
    ScenarioResult& result_;
    fs::path dir_;
};

void check(ScenarioResult& r, bool ok, const std::string& name) {
    r.report["checks"][name] = ok;
    if (!ok) r.failed_checks.push_back(name);
}

GridGeometry geometry_of(const NumericsConfig& n) {
    if (n.lower.size() == 1) return GridGeometry::line(n.lower[0], n.upper[0], n.points[0]);
    return GridGeometry::plane(n.lower[0], n.upper[0], n.points[0], n.lower[1], n.upper[1], n.points[1]);
}

json fringe_json(const FringeReport& f) {
    json j;
    j["peaks"] = json::array();
    for (const Peak& p : f.peaks)
        j["peaks"].push_back({{"position", p.position}, {"height", p.height}, {"fwhm", p.fwhm},
                              {"one_sided", p.at_boundary}});
    j["spacing_estimate"] = f.spacing_estimate;
    j["innermost_ratio"] = f.innermost_ratio ? json(*f.innermost_ratio) : json(nullptr);
    return j;
}

json noncrossing_json(const NonCrossingReport& r) {
    json j{{"passed", r.passed}};
    if (r.first_violation)
        j["first_violation"] = {{"path_a", r.first_violation->path_a},
                                {"path_b", r.first_violation->path_b},
                                {"time_index", r.first_violation->time_index},
                                {"t", r.first_violation->t}};
    return j;
}

// trajectories.csv plus a JSON sidecar describing how the paths were made.
void write_trajectories(Outputs& out, const TrajectoryEnsemble& ens, const ScenarioConfig& cfg,
                        const IntegrationOptions& io, const std::string& provider) {
    if (out.wants("csv")) {
        auto f = out.open("trajectories.csv");
        write_ensemble_csv(f, ens);
    }
    if (out.wants("json")) {
        const json cj = config_to_json(cfg);
        json side{{"csv", "trajectories.csv"},
                  {"columns", {"path_id", "t", "x"}},
                  {"parameters", cj["physics"]},
                  {"tolerances",
                   {{"rel_tol", io.rel_tol},
                    {"abs_tol", io.abs_tol < 0.0 ? io.rel_tol : io.abs_tol},
                    {"max_steps", io.max_steps}}},
                  {"provider", provider},
                  {"sampling", "quantiles (i - 1/2)/n of the initial density, equal weights"},
                  {"seed", cfg.outputs.seed},
                  {"n_paths", ens.size()},
                  {"n_times", ens.times.size()},
                  {"nodal_encounters", ens.encounters.size()}};
        out.open("trajectories.json") << side.dump(2) << "\n";
    }
}

// Trajectories as x (horizontal) against t (vertical).
void plot_paths(SvgPlot& plot, const TrajectoryEnsemble& ens, const SvgStyle& style) {
    for (std::size_t p = 0; p < ens.size(); ++p) plot.polyline(ens.path_coordinate(p), ens.times, style);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::free_gaussian: return "free_gaussian";
        case ScenarioKind::superposition: return "superposition";
        case ScenarioKind::effective_well: return "effective_well";
        case ScenarioKind::reaction_2d: return "reaction_2d";
    }
    return "unknown";
}

ScenarioKind scenario_from_string(const std::string& name) {
    for (ScenarioKind k : {ScenarioKind::free_gaussian, ScenarioKind::superposition, ScenarioKind::effective_well,
                           ScenarioKind::reaction_2d})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown scenario '" + name + "'");
}

bool ScenarioConfig::wants(const std::string& format) const {
    return std::find(outputs.formats.begin(), outputs.formats.end(), format) != outputs.formats.end();
}

void ScenarioConfig::validate() const {
    const auto& p = physics;
    const auto& n = numerics;
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(p.mass) || !positive(p.hbar)) throw ConfigError("physics.mass and physics.hbar must be positive");
    if (!positive(p.sigma0) || !positive(p.sigma0_y)) throw ConfigError("packet widths must be positive");
    if (!std::isfinite(p.x0) || !std::isfinite(p.y0) || !std::isfinite(p.v0))
        throw ConfigError("packet position and velocity must be finite");

    const std::size_t dim = scenario == ScenarioKind::reaction_2d ? 2 : 1;
    if (n.lower.size() != dim || n.upper.size() != dim || n.points.size() != dim)
        throw ConfigError("numerics.lower/upper/points need " + std::to_string(dim) + " entr" +
                          (dim == 1 ? "y" : "ies") + " for this scenario");
    for (std::size_t a = 0; a < dim; ++a) {
        if (!(n.upper[a] > n.lower[a])) throw ConfigError("numerics.upper must exceed numerics.lower");
        if (n.points[a] < 16) throw ConfigError("numerics.points must be at least 16");
    }
    if (!positive(n.dt)) throw ConfigError("numerics.dt must be positive");
    if (!(n.t_final >= 0.0) || !std::isfinite(n.t_final)) throw ConfigError("numerics.t_final must be non-negative");
    if (!positive(n.tol)) throw ConfigError("numerics.tol must be positive");
    if (n.snapshot_stride == 0) throw ConfigError("numerics.snapshot_stride must be positive");
    if (n.n_times < 2) throw ConfigError("numerics.n_times must be at least 2");
    if (n.absorber_width < 0.0 || n.absorber_strength < 0.0) throw ConfigError("absorber settings must be non-negative");
    if (!positive(n.huygens_below) || !(n.fraunhofer_above > n.huygens_below) || !std::isfinite(n.fraunhofer_above))
        throw ConfigError("numerics.huygens_below must be positive and below numerics.fraunhofer_above");
    for (const auto& f : outputs.formats)
        if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown output format '" + f + "'");
    if (outputs.directory.empty()) throw ConfigError("outputs.directory must not be empty");

    switch (scenario) {
        case ScenarioKind::free_gaussian:
            if (n.n_trajectories == 0) throw ConfigError("numerics.n_trajectories must be positive");
            if (!(n.t_final > 0.0)) throw ConfigError("numerics.t_final must be positive for trajectory runs");
            break;
        case ScenarioKind::superposition:
            if (n.n_trajectories == 0) throw ConfigError("numerics.n_trajectories must be positive");
            if (!(n.t_final > 0.0)) throw ConfigError("numerics.t_final must be positive for trajectory runs");
            if (!(p.x0 > 0.0)) throw ConfigError("physics.x0 (half separation) must be positive");
            break;
        case ScenarioKind::effective_well:
            if (p.v0 < 0.0) throw ConfigError("physics.v0 must be non-negative");
            if (p.x0 < 0.0) throw ConfigError("physics.x0 (distance from the wall) must be non-negative");
            break;
        case ScenarioKind::reaction_2d:
            if (!(p.v0 > 0.0)) throw ConfigError("physics.v0 must be positive");
            if (!(n.absorber_width > 0.0)) throw ConfigError("numerics.absorber_width must be positive");
            break;
    }
}

ScenarioConfig config_from_json(const json& doc) {
    reject_unknown(doc, {"scenario", "physics", "numerics", "outputs"}, "config");
    if (!doc.contains("scenario") || !doc["scenario"].is_string()) throw ConfigError("config.scenario is required");
    ScenarioConfig c = default_config(scenario_from_string(doc["scenario"].get<std::string>()));

    if (doc.contains("physics")) {
        const json& p = doc["physics"];
        reject_unknown(p, {"mass", "hbar", "sigma0", "sigma0_y", "x0", "y0", "v0", "include_well", "pes"}, "physics");
        read(p, "mass", c.physics.mass, "physics");
        read(p, "hbar", c.physics.hbar, "physics");
        read(p, "sigma0", c.physics.sigma0, "physics");
        read(p, "sigma0_y", c.physics.sigma0_y, "physics");
        read(p, "x0", c.physics.x0, "physics");
        read(p, "y0", c.physics.y0, "physics");
        read(p, "v0", c.physics.v0, "physics");
        read(p, "include_well", c.physics.include_well, "physics");
        if (p.contains("pes")) {
            const json& s = p["pes"];
            reject_unknown(s, {"barrier_height", "barrier_width", "omega", "valley_shift", "valley_length", "cap"},
                           "physics.pes");
            ModelPes2D& m = c.physics.pes;
            read(s, "barrier_height", m.barrier_height, "physics.pes");
            read(s, "barrier_width", m.barrier_width, "physics.pes");
            read(s, "omega", m.omega, "physics.pes");
            read(s, "valley_shift", m.valley_shift, "physics.pes");
            read(s, "valley_length", m.valley_length, "physics.pes");
            read(s, "cap", m.cap, "physics.pes");
        }
    }
    if (doc.contains("numerics")) {
        const json& n = doc["numerics"];
        reject_unknown(n, {"lower", "upper", "points", "dt", "t_final", "tol", "snapshot_stride", "n_trajectories",
                           "n_times", "absorber_width", "absorber_strength", "huygens_below",
                           "fraunhofer_above"},
                       "numerics");
        auto vec_or_scalar = [&](const char* key, auto& dest) {
            if (!n.contains(key)) return;
            using V = typename std::decay_t<decltype(dest)>::value_type;
            try {
                dest = n[key].is_array() ? n[key].get<std::vector<V>>() : std::vector<V>{n[key].get<V>()};
            } catch (const json::exception&) {
                throw ConfigError(std::string("numerics.") + key + " has the wrong type");
            }
        };
        vec_or_scalar("lower", c.numerics.lower);
        vec_or_scalar("upper", c.numerics.upper);
        vec_or_scalar("points", c.numerics.points);
        read(n, "dt", c.numerics.dt, "numerics");
        read(n, "t_final", c.numerics.t_final, "numerics");
        read(n, "tol", c.numerics.tol, "numerics");
        read(n, "snapshot_stride", c.numerics.snapshot_stride, "numerics");
        read(n, "n_trajectories", c.numerics.n_trajectories, "numerics");
        read(n, "n_times", c.numerics.n_times, "numerics");
        read(n, "absorber_width", c.numerics.absorber_width, "numerics");
        read(n, "absorber_strength", c.numerics.absorber_strength, "numerics");
        read(n, "huygens_below", c.numerics.huygens_below, "numerics");
        read(n, "fraunhofer_above", c.numerics.fraunhofer_above, "numerics");
    }
    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        reject_unknown(o, {"directory", "formats", "seed", "snapshots"}, "outputs");
        read(o, "directory", c.outputs.directory, "outputs");
        read(o, "formats", c.outputs.formats, "outputs");
        read(o, "seed", c.outputs.seed, "outputs");
        read(o, "snapshots", c.outputs.snapshots, "outputs");
    }
    c.validate();
    return c;
}

json config_to_json(const ScenarioConfig& c) {
    const ModelPes2D& m = c.physics.pes;
    json doc;
    doc["scenario"] = to_string(c.scenario);
    doc["physics"] = {{"mass", c.physics.mass},
                      {"hbar", c.physics.hbar},
                      {"sigma0", c.physics.sigma0},
                      {"sigma0_y", c.physics.sigma0_y},
                      {"x0", c.physics.x0},
                      {"y0", c.physics.y0},
                      {"v0", c.physics.v0},
                      {"include_well", c.physics.include_well},
                      {"pes",
                       {{"barrier_height", m.barrier_height},
                        {"barrier_width", m.barrier_width},
                        {"omega", m.omega},
                        {"valley_shift", m.valley_shift},
                        {"valley_length", m.valley_length},
                        {"cap", m.cap}}}};
    doc["numerics"] = {{"lower", c.numerics.lower},
                       {"upper", c.numerics.upper},
                       {"points", c.numerics.points},
                       {"dt", c.numerics.dt},
                       {"t_final", c.numerics.t_final},
                       {"tol", c.numerics.tol},
                       {"snapshot_stride", c.numerics.snapshot_stride},
                       {"n_trajectories", c.numerics.n_trajectories},
                       {"n_times", c.numerics.n_times},
                       {"absorber_width", c.numerics.absorber_width},
                       {"absorber_strength", c.numerics.absorber_strength},
                       {"huygens_below", c.numerics.huygens_below},
                       {"fraunhofer_above", c.numerics.fraunhofer_above}};
    doc["outputs"] = {{"directory", c.outputs.directory},
                      {"formats", c.outputs.formats},
                      {"seed", c.outputs.seed},
                      {"snapshots", c.outputs.snapshots}};
    return doc;
}

ScenarioConfig default_config(ScenarioKind kind) {
    ScenarioConfig c;
    c.scenario = kind;
    auto& p = c.physics;
    auto& n = c.numerics;
    switch (kind) {
        case ScenarioKind::free_gaussian:
            // tau = 2; the run spans ten spreading times.
            p.x0 = 0.0;
            p.v0 = 1.0;
            n.lower = {-80.0};
            n.upper = {120.0};
            n.points = {2048};
            n.dt = 0.005;
            n.t_final = 20.0;
            n.tol = 1e-10;
            n.snapshot_stride = 100;
            n.n_trajectories = 21;
            n.n_times = 401;
            break;
        case ScenarioKind::superposition:
            // v0 / v_s = 0.1: interference-like.
            p.x0 = 10.0;
            p.v0 = 0.05;
            n.lower = {-60.0};
            n.upper = {60.0};
            n.points = {480};
            n.t_final = 40.0;
            n.tol = 1e-8;
            n.n_trajectories = 50;
            n.n_times = 201;
            break;
        case ScenarioKind::effective_well:
            p.x0 = 15.0;
            p.v0 = 0.05;
            n.lower = {-100.0};
            n.upper = {100.0};
            n.points = {2048};
            n.dt = 0.005;
            n.t_final = 30.0;
            n.snapshot_stride = 600;
            break;
        case ScenarioKind::reaction_2d:
            p.x0 = -8.0;
            p.y0 = 0.0;
            p.v0 = 1.0;
            n.lower = {-20.0, -10.0};
            n.upper = {20.0, 10.0};
            n.points = {256, 256};
            n.dt = 0.01;
            n.t_final = 14.0;
            n.snapshot_stride = 50;
            n.absorber_width = 3.0;
            n.absorber_strength = 5.0;
            n.n_trajectories = 0;
            break;
    }
    c.outputs.directory = "out/" + to_string(kind);
    return c;
}

void apply_override(json& doc, const std::string& dotted_key, const std::string& value) {
    if (dotted_key.empty()) throw ConfigError("empty override key");
    std::string pointer;
    std::stringstream ss(dotted_key);
    for (std::string part; std::getline(ss, part, '.');) {
        if (part.empty()) throw ConfigError("malformed override key '" + dotted_key + "'");
        pointer += "/" + part;
    }
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;
    try {
        doc[json::json_pointer(pointer)] = parsed;
    } catch (const json::exception&) {
        throw ConfigError("cannot apply override '" + dotted_key + "'");
    }
}

// ---------------------------------------------------------------------------
// Scenarios

ScenarioResult run_free_gaussian(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult r;
    Outputs out(cfg, r);
    const auto& ph = cfg.physics;
    const auto& nu = cfg.numerics;

    const GaussianParams gp = GaussianParams::line(ph.sigma0, ph.x0, ph.v0, ph.mass, ph.hbar);
    const SuperpositionSpec spec = SuperpositionSpec::single(gp);
    const double tau = gp.tau();

    const std::vector<double> times = linspace(0.0, nu.t_final, nu.n_times);
    const std::vector<double> start = sample_initial_positions(initial_density(spec), nu.n_trajectories);
    IntegrationOptions io;
    io.rel_tol = nu.tol;
    const TrajectoryEnsemble ens = integrate_ensemble(AnalyticProvider(spec), start, times, io);

    r.report["scenario"] = "free_gaussian";
    r.report["tau"] = tau;
    r.report["spreading_velocity"] = gp.spreading_velocity();
    r.report["n_trajectories"] = ens.size();
    r.report["nodal_encounters"] = ens.encounters.size();

    // Regimes along the time base.
    const RegimeThresholds thresholds{nu.huygens_below, nu.fraunhofer_above};
    json regimes = json::array();
    Regime last = classify_regime(gp, times.front(), thresholds);
    regimes.push_back({{"regime", to_string(last)}, {"from", times.front()}});
    for (double t : times) {
        const Regime now = classify_regime(gp, t, thresholds);
        if (now != last) {
            regimes.push_back({{"regime", to_string(now)}, {"from", t}});
            last = now;
        }
    }
    r.report["regimes"] = regimes;
    if (out.wants("csv")) {
        auto f = out.open("regimes.csv");
        f << "t,t_over_tau,regime\n";
        for (double t : times) f << num(t) << "," << num(t / tau) << "," << to_string(classify_regime(gp, t, thresholds)) << "\n";
    }

    const NonCrossingReport nc = check_noncrossing(ens);
    r.report["noncrossing"] = noncrossing_json(nc);
    check(r, nc.passed, "noncrossing");

    // Classical comparison lines: x0 + v0 t (early) and x_c + (v0 + xi0/tau) t (late).
    json classical = json::array();
    const bool asymptotic = nu.t_final >= 20.0 * tau;
    std::vector<double> slopes;
    if (asymptotic) slopes = asymptotic_slope(ens, 0.5 * nu.t_final, nu.t_final);
    double worst_slope = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double xi0 = start[i] - ph.x0;
        json line{{"path", i}, {"x0", start[i]}, {"early_slope", ph.v0}, {"late_slope", ph.v0 + xi0 / tau}};
        if (asymptotic) {
            line["measured_slope"] = slopes[i];
            const double scale = std::max(std::abs(ph.v0 + xi0 / tau), gp.spreading_velocity());
            worst_slope = std::max(worst_slope, std::abs(slopes[i] - (ph.v0 + xi0 / tau)) / scale);
        }
        classical.push_back(line);
    }
    r.report["classical_lines"] = classical;
    if (asymptotic) {
        r.report["slope_window"] = {0.5 * nu.t_final, nu.t_final};
        r.report["max_relative_slope_error"] = worst_slope;
        check(r, worst_slope <= 0.01, "asymptotic_slope");
    }

    const EhrenfestReport eh = ehrenfest_check(ens, gp, 1e-6);
    r.report["ehrenfest"] = {{"max_deviation", eh.max_deviation}, {"passed", eh.passed}};
    check(r, eh.passed, "ehrenfest");

    // Spreading fit from a grid propagation.
    const GridGeometry geom = geometry_of(nu);
    GridState state = initialize_grid(spec, geom);
    const SpectralStepper stepper(geom, state.units, nu.dt);
    const std::size_t steps = std::size_t(std::llround(nu.t_final / nu.dt));
    std::vector<GridState> snaps{state};
    for (std::size_t s = 0; s < steps; s += nu.snapshot_stride) {
        const std::size_t k = std::min(nu.snapshot_stride, steps - s);
        stepper.advance(state, FreePotential{}, k);
        snaps.push_back(state);
    }
    if (cfg.outputs.snapshots)
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshots/snap_%05zu.bin", k);
            write_snapshot(out.path(name), snaps[k]);
        }
    try {
        const SigmaFit fit = fit_sigma(snaps);
        const double err = std::abs(fit.sigma0 - ph.sigma0) / ph.sigma0;
        r.report["sigma_fit"] = {{"sigma0", fit.sigma0},
                                 {"tau", fit.tau},
                                 {"model_sigma0", ph.sigma0},
                                 {"model_tau", tau},
                                 {"rms_relative_residual", fit.rms_relative_residual},
                                 {"sigma0_relative_error", err}};
        check(r, err <= 1e-3 && !fit.model_mismatch, "sigma_fit");
    } catch (const FitDiverged& e) {
        r.report["sigma_fit"] = {{"error", e.what()}};
        check(r, false, "sigma_fit");
    }

    write_trajectories(out, ens, cfg, io, "analytic single packet");
    if (out.wants("svg")) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& path : ens.paths)
            for (const Vec2& p : path)
                if (std::isfinite(p.x)) {
                    lo = std::min(lo, p.x);
                    hi = std::max(hi, p.x);
                }
        const double pad = 0.05 * std::max(hi - lo, 1.0);
        SvgPlot plot(lo - pad, hi + pad, 0.0, std::max(nu.t_final, 1e-9));
        plot.title("Free Gaussian packet: quantum trajectories");
        plot.labels("x", "t");
        plot_paths(plot, ens, SvgStyle{"#1f4e9c", 1.0, "", "trajectory"});
        const SvgStyle early{"#2a9d2a", 0.8, "4 3", "classical-early"};
        const SvgStyle late{"#c0392b", 0.8, "2 2", "classical-late"};
        for (std::size_t i = 0; i < ens.size(); ++i) {
            const double xi0 = start[i] - ph.x0;
            const double t_end = nu.t_final;
            const std::vector<double> t2{0.0, t_end};
            plot.polyline(std::vector<double>{start[i], start[i] + ph.v0 * t_end}, t2, early);
            plot.polyline(std::vector<double>{ph.x0, ph.x0 + (ph.v0 + xi0 / tau) * t_end}, t2, late);
        }
        plot.legend("Bohmian trajectory", SvgStyle{"#1f4e9c", 1.0, "", ""});
        plot.legend("x0 + v0 t", early);
        plot.legend("(v0 + x0/tau) t", late);
        out.svg("trajectories.svg", plot);
    }
    out.report_json("report.json", r.report);
    return r;
}

ScenarioResult run_superposition(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult r;
    Outputs out(cfg, r);
    const auto& ph = cfg.physics;
    const auto& nu = cfg.numerics;

    const SuperpositionSpec spec = SuperpositionSpec::counter_propagating(ph.sigma0, ph.x0, ph.v0, ph.mass, ph.hbar);
    const GaussianParams& gp = spec.components.front();
    const double ratio = std::abs(ph.v0) / gp.spreading_velocity();
    const bool collision = ratio >= 1.0;

    r.report["scenario"] = "superposition";
    r.report["v0_over_vs"] = ratio;
    r.report["label"] = collision ? "collision-like" : "interference-like";

    const std::vector<double> times = linspace(0.0, nu.t_final, nu.n_times);
    const std::vector<double> start = sample_initial_positions(initial_density(spec), nu.n_trajectories);
    IntegrationOptions io;
    io.rel_tol = nu.tol;
    const TrajectoryEnsemble ens = integrate_ensemble(AnalyticProvider(spec), start, times, io);
    r.report["nodal_encounters"] = ens.encounters.size();

    const NonCrossingReport nc = check_noncrossing(ens);
    r.report["noncrossing"] = noncrossing_json(nc);
    check(r, nc.passed, "noncrossing");

    // Field maps over (x, t).
    const GridGeometry geom = geometry_of(nu);
    const std::size_t nx = geom.points[0];
    std::vector<double> xs(nx);
    for (std::size_t i = 0; i < nx; ++i) xs[i] = geom.coordinate(0, i);
    std::vector<double> rho_map(nx * times.size());
    std::vector<double> phase_map(nx * times.size());
    std::vector<double> v_map(nx * times.size(), NAN);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < times.size(); ++k) {
            const FieldSample f = field_sample(spec, Vec2{xs[i], 0.0}, times[k]);
            const std::size_t at = i * times.size() + k;
            rho_map[at] = f.rho;
            phase_map[at] = std::arg(evaluate_psi(spec, xs[i], times[k]));
            if (f.v) v_map[at] = f.v->x;
        }
    if (out.wants("csv")) {
        auto f = out.open("fields.csv");
        f << "t,x,rho,phase,v\n";
        for (std::size_t k = 0; k < times.size(); ++k)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t at = i * times.size() + k;
                f << num(times[k]) << "," << num(xs[i]) << "," << num(rho_map[at]) << "," << num(phase_map[at]) << ","
                  << num(v_map[at]) << "\n";
            }
    }

    std::vector<double> rho_final(nx);
    for (std::size_t i = 0; i < nx; ++i) rho_final[i] = rho_map[i * times.size() + times.size() - 1];
    const double st = sigma_t(gp, nu.t_final);
    const PatternReport pattern = classify_pattern(xs, rho_final, st);
    r.report["final_pattern"] = {{"pattern", to_string(pattern.pattern)},
                                 {"peak_count", pattern.peak_count},
                                 {"lobe_separation", pattern.lobe_separation},
                                 {"gap_ratio", pattern.gap_ratio},
                                 {"sigma_t", st}};
    try {
        const FringeReport fr = find_fringes(xs, rho_final);
        r.report["fringes"] = fringe_json(fr);
        if (out.wants("csv")) {
            auto f = out.open("fringes.csv");
            f << "position,height,fwhm\n";
            for (const Peak& p : fr.peaks) f << num(p.position) << "," << num(p.height) << "," << num(p.fwhm) << "\n";
        }
    } catch (const TooFewPeaks& e) {
        r.report["fringes"] = {{"error", e.what()}};
    }
    check(r, pattern.pattern == (collision ? DensityPattern::separated_lobes : DensityPattern::fringes),
          collision ? "separated_lobes" : "persistent_fringes");

    write_trajectories(out, ens, cfg, io, "analytic superposition");
    if (out.wants("svg")) {
        // The (x, t) lattice as a plane geometry for contouring.
        const double dt_map = times.size() > 1 ? times[1] - times[0] : 1.0;
        const GridGeometry xt = GridGeometry::plane(geom.lower[0], geom.lower[0] + geom.spacing(0) * double(nx), nx,
                                                    0.0, dt_map * double(times.size()), times.size());
        const double rmax = *std::max_element(rho_map.begin(), rho_map.end());
        std::vector<double> levels;
        for (double f : {0.05, 0.15, 0.3, 0.5, 0.7, 0.9}) levels.push_back(f * rmax);

        SvgPlot density(xs.front(), xs.back(), 0.0, std::max(nu.t_final, 1e-9));
        density.title(std::string("Two-packet density (") + (collision ? "collision-like" : "interference-like") + ")");
        density.labels("x", "t");
        density.contours(xt, rho_map, levels, SvgStyle{"#c0392b", 0.8, "", "density"});
        plot_paths(density, ens, SvgStyle{"#1f4e9c", 0.7, "", "trajectory"});
        out.svg("density_trajectories.svg", density);

        std::vector<double> vlev;
        double vmax = 0.0;
        for (double v : v_map)
            if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
        std::vector<double> vclean(v_map);
        for (double& v : vclean)
            if (!std::isfinite(v)) v = 0.0;
        for (int k = -3; k <= 3; ++k)
            if (k != 0) vlev.push_back(vmax * k / 4.0);
        SvgPlot velocity(xs.front(), xs.back(), 0.0, std::max(nu.t_final, 1e-9));
        velocity.title("Velocity field v(x, t)");
        velocity.labels("x", "t");
        velocity.contours(xt, vclean, vlev, SvgStyle{"#6c3483", 0.7, "", "velocity"});
        out.svg("velocity_map.svg", velocity);

        std::vector<double> cos_phase(phase_map.size());
        for (std::size_t i = 0; i < cos_phase.size(); ++i) cos_phase[i] = std::cos(phase_map[i]);
        const std::vector<double> zero{0.0};
        SvgPlot phase(xs.front(), xs.back(), 0.0, std::max(nu.t_final, 1e-9));
        phase.title("Phase: zero lines of cos S");
        phase.labels("x", "t");
        phase.contours(xt, cos_phase, zero, SvgStyle{"#117a65", 0.6, "", "phase"});
        out.svg("phase_map.svg", phase);

        SvgPlot final_rho(xs.front(), xs.back(), 0.0, 1.05 * *std::max_element(rho_final.begin(), rho_final.end()));
        final_rho.title("Final density");
        final_rho.labels("x", "rho");
        final_rho.polyline(xs, rho_final, SvgStyle{"#000000", 1.2, "", "density"});
        out.svg("final_density.svg", final_rho);
    }
    out.report_json("report.json", r.report);
    return r;
}

ScenarioResult run_effective_well(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult r;
    Outputs out(cfg, r);
    const auto& ph = cfg.physics;
    const auto& nu = cfg.numerics;

    EffectiveWellParams params;
    params.base = GaussianParams::line(ph.sigma0, -ph.x0, ph.v0, ph.mass, ph.hbar);
    params.x0_offset = ph.x0;
    params.validate();
    const GridGeometry geom = geometry_of(nu);
    WellComparisonOptions opt;
    opt.dt = nu.dt;
    opt.include_well = ph.include_well;
    const WellComparisonReport cmp = compare_with_superposition(params, geom, nu.t_final, opt);

    r.report["scenario"] = "effective_well";
    r.report["include_well"] = ph.include_well;
    r.report["v0_over_vs"] = ph.v0 / params.base.spreading_velocity();
    r.report["well"] = {{"width_initial", well_width(params, 0.0)},
                        {"width_final", well_width(params, nu.t_final)},
                        {"depth_initial", well_depth(params, 0.0)},
                        {"depth_final", well_depth(params, nu.t_final)}};
    r.report["grid_spacing"] = cmp.grid_spacing;
    r.report["norm_drift"] = cmp.norm_drift;
    r.report["fringes_superposition"] = fringe_json(cmp.fringes_superposition);
    r.report["fringes_well"] = fringe_json(cmp.fringes_well);
    r.report["same_peak_count"] = cmp.same_peak_count;
    r.report["max_position_offset"] = cmp.max_position_offset;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < cmp.x.size(); ++i)
        max_diff = std::max(max_diff, std::abs(cmp.rho_well[i] - cmp.rho_superposition[i]));
    r.report["max_density_difference"] = max_diff;
    check(r, cmp.positions_agree, "fringe_positions_within_one_cell");
    check(r, cmp.half_width_superposition, "half_width_superposition");
    check(r, cmp.half_width_well, "half_width_well");

    if (out.wants("csv")) {
        auto d = out.open("densities.csv");
        d << "x,rho_superposition,rho_well\n";
        for (std::size_t i = 0; i < cmp.x.size(); ++i)
            d << num(cmp.x[i]) << "," << num(cmp.rho_superposition[i]) << "," << num(cmp.rho_well[i]) << "\n";
        auto f = out.open("fringes.csv");
        f << "run,position,height,fwhm\n";
        for (const Peak& p : cmp.fringes_superposition.peaks)
            f << "superposition," << num(p.position) << "," << num(p.height) << "," << num(p.fwhm) << "\n";
        for (const Peak& p : cmp.fringes_well.peaks)
            f << "well," << num(p.position) << "," << num(p.height) << "," << num(p.fwhm) << "\n";
    }
    if (out.wants("svg")) {
        // Plot the part of the half-line that carries the pattern.
        const double peak = std::max(*std::max_element(cmp.rho_well.begin(), cmp.rho_well.end()),
                                     *std::max_element(cmp.rho_superposition.begin(), cmp.rho_superposition.end()));
        double x_lo = 0.0;
        for (std::size_t i = 0; i < cmp.x.size(); ++i)
            if (std::max(cmp.rho_well[i], cmp.rho_superposition[i]) > 1e-3 * peak) {
                x_lo = cmp.x[i];
                break;
            }
        SvgPlot plot(std::min(x_lo, -1.0), 0.0, 0.0, 1.1 * peak);
        plot.title("Effective well against two-packet superposition, t = " + num(nu.t_final));
        plot.labels("x", "rho");
        const SvgStyle sup{"#000000", 1.2, "6 4", "superposition"};
        const SvgStyle well{"#c0392b", 1.4, "", "well"};
        plot.polyline(cmp.x, cmp.rho_superposition, sup);
        plot.polyline(cmp.x, cmp.rho_well, well);
        plot.legend("two packets", sup);
        plot.legend(ph.include_well ? "single packet + well" : "single packet + wall", well);
        out.svg("overlay.svg", plot);
    }
    out.report_json("report.json", r.report);
    return r;
}

ScenarioResult run_reaction_2d(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult r;
    Outputs out(cfg, r);
    const auto& ph = cfg.physics;
    const auto& nu = cfg.numerics;
    const ModelPes2D pes = ph.pes;

    GaussianParams gp;
    gp.mass = ph.mass;
    gp.hbar = ph.hbar;
    gp.sigma0 = Vec2{ph.sigma0, ph.sigma0_y};
    gp.center = Vec2{ph.x0, pes.valley_floor(ph.x0) + ph.y0};
    gp.v0 = Vec2{ph.v0, 0.0};
    const GridGeometry geom = geometry_of(nu);
    GridState state = initialize_grid(SuperpositionSpec::single(gp, 2), geom);
    const SpectralStepper stepper(geom, state.units, nu.dt);
    Absorber absorber(geom, nu.absorber_width, nu.absorber_strength, nu.dt);
    const PotentialSpec potential = pes;

    // Dividing line x = 0 (the saddle); flux by fourth-order differences along x.
    const std::size_t ix0 = geom.nearest(0, 0.0);
    const std::size_t ny = geom.points[1];
    const std::size_t nx = geom.points[0];
    const double dx = geom.spacing(0), dy = geom.spacing(1);
    auto flux = [&](const GridState& s) {
        double f = 0.0;
        auto at = [&](long ix, std::size_t iy) { return s.psi[geom.index(std::size_t((ix + long(nx)) % long(nx)), iy)]; };
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const long i = long(ix0);
            const cplx d = (at(i - 2, iy) - 8.0 * at(i - 1, iy) + 8.0 * at(i + 1, iy) - at(i + 2, iy)) / (12.0 * dx);
            f += (s.units.hbar / s.units.mass) * (std::conj(at(i, iy)) * d).imag();
        }
        return f * dy;
    };

    const double arrival = (-2.0 * pes.barrier_width - (gp.center.x + 3.0 * ph.sigma0)) / ph.v0;
    const double quantum = 2.0 * std::numbers::pi * ph.hbar / ph.mass;
    r.report["scenario"] = "reaction_2d";
    r.report["arrival_time"] = arrival;
    r.report["dividing_line_x"] = geom.coordinate(0, ix0);

    const std::size_t steps = std::size_t(std::llround(nu.t_final / nu.dt));
    double transmitted = 0.0;
    double f_prev = flux(state);
    json series = json::array();
    json vortex_log = json::array();
    std::vector<GridState> plotted;
    const std::size_t n_snap = steps / nu.snapshot_stride + 1;
    const std::size_t plot_every = std::max<std::size_t>(1, n_snap / 6);
    bool any_vortex = false, early_clean = true, quantized = true;
    double worst_circulation = 0.0;

    for (std::size_t n = 0;; ++n) {
        if (n % nu.snapshot_stride == 0) {
            const std::size_t snap = n / nu.snapshot_stride;
            const VortexReport vr = detect_vortices(state);
            json entry{{"t", state.t}, {"count", vr.vortices.size()}, {"vortices", json::array()}};
            for (const Vortex& v : vr.vortices) {
                const double rel = std::abs(v.circulation - v.winding * quantum) / (std::abs(v.winding) * quantum);
                worst_circulation = std::max(worst_circulation, rel);
                quantized = quantized && rel <= 0.01;
                entry["vortices"].push_back({{"x", v.position.x},
                                             {"y", v.position.y},
                                             {"winding", v.winding},
                                             {"circulation", v.circulation},
                                             {"loop_radius", v.loop_half_width}});
            }
            if (!vr.vortices.empty()) any_vortex = true;
            if (state.t < arrival && !vr.vortices.empty()) early_clean = false;
            vortex_log.push_back(entry);
            series.push_back({{"t", state.t},
                              {"flux", f_prev},
                              {"transmitted", transmitted},
                              {"absorbed", absorber.absorbed()},
                              {"norm", state.norm()}});
            if (snap % plot_every == 0) plotted.push_back(state);
            if (cfg.outputs.snapshots) {
                char name[64];
                std::snprintf(name, sizeof name, "snapshots/snap_%05zu.bin", snap);
                write_snapshot(out.path(name), state);
            }
        }
        if (n == steps) break;
        stepper.advance(state, potential, 1);
        absorber.apply_in_place(state);
        const double f_now = flux(state);
        transmitted += 0.5 * nu.dt * (f_prev + f_now);
        f_prev = f_now;
    }

    r.report["transmitted_fraction"] = transmitted;
    r.report["absorbed"] = absorber.absorbed();
    r.report["final_norm"] = state.norm();
    r.report["max_relative_circulation_error"] = worst_circulation;
    r.report["vortex_snapshots"] = vortex_log;
    check(r, quantized, "circulation_quantized");
    check(r, early_clean, "no_vortices_before_arrival");
    check(r, any_vortex, "vortices_in_overlap_window");

    if (out.wants("csv")) {
        auto f = out.open("transmission.csv");
        f << "t,flux,transmitted,absorbed,norm\n";
        for (const json& e : series)
            f << num(e["t"].get<double>()) << "," << num(e["flux"].get<double>()) << ","
              << num(e["transmitted"].get<double>()) << "," << num(e["absorbed"].get<double>()) << ","
              << num(e["norm"].get<double>()) << "\n";
    }
    if (out.wants("svg")) {
        // Potential contours shared by every frame.
        std::vector<double> v(geom.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 p = geom.node(i);
            v[i] = pes.evaluate(p.x, p.y, ph.mass);
        }
        std::vector<double> v_levels;
        for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) v_levels.push_back(f * pes.barrier_height);
        for (std::size_t k = 0; k < plotted.size(); ++k) {
            const GridState& s = plotted[k];
            const std::vector<double> rho = s.density();
            const std::vector<Vec2> j = grid_current(s);
            const double rmax = *std::max_element(rho.begin(), rho.end());
            std::vector<double> levels;
            for (double f : {0.02, 0.1, 0.25, 0.5, 0.75}) levels.push_back(f * rmax);
            std::vector<Vec2> at, vec;
            double vmax = 0.0;
            for (std::size_t ix = 0; ix < nx; ix += 8)
                for (std::size_t iy = 0; iy < ny; iy += 8) {
                    const std::size_t i = geom.index(ix, iy);
                    if (rho[i] < 1e-2 * rmax) continue;
                    at.push_back(geom.node(i));
                    vec.push_back((1.0 / rho[i]) * j[i]);
                    vmax = std::max(vmax, vec.back().norm());
                }
            SvgPlot plot(geom.lower[0], geom.upper[0], geom.lower[1], geom.upper[1], 720, 400);
            plot.title("Reaction model: density and velocity field, t = " + num(s.t));
            plot.labels("x", "y");
            plot.contours(geom, v, v_levels, SvgStyle{"#999999", 0.5, "3 3", "potential"});
            plot.contours(geom, rho, levels, SvgStyle{"#c0392b", 0.9, "", "density"});
            plot.arrows(at, vec, vmax > 0.0 ? 1.2 * 8.0 * dx / vmax : 0.0, SvgStyle{"#1f4e9c", 0.7, "", "velocity"});
            char name[64];
            std::snprintf(name, sizeof name, "frame_%02zu.svg", k);
            out.svg(name, plot);
        }
    }
    out.report_json("report.json", r.report);
    return r;
}

// ---------------------------------------------------------------------------

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 unavailable");
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, std::size_t(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::string hex;
    char two[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(two, sizeof two, "%02x", md[i]);
        hex += two;
    }
    return hex;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    ScenarioResult r;
    switch (config.scenario) {
        case ScenarioKind::free_gaussian: r = run_free_gaussian(config); break;
        case ScenarioKind::superposition: r = run_superposition(config); break;
        case ScenarioKind::effective_well: r = run_effective_well(config); break;
        case ScenarioKind::reaction_2d: r = run_reaction_2d(config); break;
    }

    const fs::path dir = config.outputs.directory;
    std::vector<fs::path> files = r.artifacts;
    std::sort(files.begin(), files.end());
    json manifest;
    manifest["tool"] = "bohmtraj";
    manifest["versions"] = {{"bohmtraj", kToolVersion},
                            {"fftw", std::string(fftw_version)},
                            {"openssl", OPENSSL_VERSION_TEXT},
                            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    manifest["formats"] = {{"csv", "bohm-csv/1"},
                           {"json", "bohm-report/1"},
                           {"svg", "svg-1.1"},
                           {"snapshot", "BOHMSNAP/1"}};
    manifest["reproducible"] = true;
    manifest["config"] = config_to_json(config);
    manifest["checks_passed"] = r.checks_passed();
    manifest["failed_checks"] = r.failed_checks;
    manifest["outputs"] = json::array();
    for (const fs::path& f : files)
        manifest["outputs"].push_back(
            {{"file", f.generic_string()}, {"bytes", fs::file_size(dir / f)}, {"sha256", sha256_file(dir / f)}});
    std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << "\n";
    return r;
}

}  // namespace bohm
