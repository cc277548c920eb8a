#include "bohm/effective_well.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/errors.hpp"
#include "bohm/potential.hpp"
#include "bohm/propagator.hpp"

namespace bohm {

void EffectiveWellParams::validate() const {
    base.validate(1);
    if (!(p0() >= 0.0)) throw InvalidParameter("incident momentum must be non-negative");
    if (!(x0_offset >= 0.0) || !std::isfinite(x0_offset))
        throw InvalidParameter("packet offset from the wall must be non-negative");
    if (p0() == 0.0 && x0_offset == 0.0) throw DegenerateWell("p0 = 0 and x0 = 0 leave the well width undefined");
}

GaussianParams EffectiveWellParams::incident() const {
    GaussianParams p = base;
    p.center = Vec2{-x0_offset, 0.0};
    p.v0 = Vec2{std::abs(base.v0.x), 0.0};
    p.weight = 1.0;
    return p;
}

SuperpositionSpec EffectiveWellParams::mirrored_superposition() const {
    return SuperpositionSpec::counter_propagating(base.sigma0.x, x0_offset, base.v0.x, base.mass, base.hbar);
}

double well_width(const EffectiveWellParams& params, double t) {
    const GaussianParams& b = params.base;
    const double s0 = b.sigma0.x;
    const double denom = 2.0 * params.p0() * s0 * s0 / b.hbar + (b.hbar * t / (2.0 * b.mass * s0 * s0)) * params.x0_offset;
    if (!(denom > 0.0)) throw DegenerateWell("well width denominator is not positive");
    const double st = sigma_t(b, t, 0);
    return std::numbers::pi * st * st / denom;
}

double well_depth(const EffectiveWellParams& params, double t) {
    const double w = well_width(params, t);
    return 2.0 * params.base.hbar * params.base.hbar / (params.base.mass * w * w);
}

namespace {

std::size_t wall_node(const GridGeometry& g) {
    if (g.dimension != 1) throw InvalidParameter("the effective well is one-dimensional");
    const std::size_t i = g.nearest(0, EffectiveWellParams::wall_position);
    if (std::abs(g.coordinate(0, i) - EffectiveWellParams::wall_position) > 1e-9 * g.spacing(0))
        throw InvalidParameter("the wall position x = 0 must be a grid node");
    return i;
}

}  // namespace

WellNodes potential_on_grid(const EffectiveWellParams& params, const GridGeometry& geometry, double t,
                            bool include_well) {
    wall_node(geometry);
    const double w = well_width(params, t);
    const double depth = include_well ? well_depth(params, t) : 0.0;
    WellNodes out{std::vector<double>(geometry.size(), 0.0), std::vector<std::uint8_t>(geometry.size(), 0)};
    const double eps = 1e-12 * geometry.spacing(0);
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        const double x = geometry.coordinate(0, i);
        if (x >= -eps) {
            out.wall[i] = 1;
        } else if (x >= -w) {
            out.values[i] = -depth;
        }
    }
    return out;
}

WellComparisonReport compare_with_superposition(const EffectiveWellParams& params, const GridGeometry& geometry,
                                                double t_final, const WellComparisonOptions& options) {
    params.validate();
    geometry.validate();
    const std::size_t i_wall = wall_node(geometry);
    if (!(t_final >= 0.0)) throw InvalidParameter("final time must be non-negative");
    if (!(options.dt > 0.0)) throw InvalidParameter("time step must be positive");

    const Units units{params.base.mass, params.base.hbar};
    InitializeOptions init;
    init.boundary = Boundary::dirichlet;
    GridState state = initialize_grid(SuperpositionSpec::single(params.incident(), 1), geometry, init);
    for (std::size_t i = i_wall; i < state.psi.size(); ++i) state.psi[i] = 0.0;
    const double n0 = state.norm();
    for (cplx& z : state.psi) z /= std::sqrt(n0);

    const std::size_t steps = std::size_t(std::llround(t_final / options.dt));
    if (steps > 0) {
        const ImplicitStepper stepper(geometry, units, t_final / double(steps));
        stepper.advance(state, EffectiveWellPotential{params, options.include_well}, steps);
    }
    state.t = t_final;

    WellComparisonReport report;
    report.t_final = t_final;
    report.grid_spacing = geometry.spacing(0);
    report.norm_drift = std::abs(1.0 - state.norm());

    const SuperpositionSpec mirror = params.mirrored_superposition();
    for (std::size_t i = 0; i <= i_wall; ++i) {
        const double x = geometry.coordinate(0, i);
        report.x.push_back(x);
        report.rho_well.push_back(std::norm(state.psi[i]));
        report.rho_superposition.push_back(std::norm(evaluate_psi(mirror, x, t_final)));
    }

    auto fringes = [&](const std::vector<double>& rho) -> FringeReport {
        try {
            return find_fringes(report.x, rho, options.min_prominence, WallSide::upper);
        } catch (const TooFewPeaks&) {
            return {};
        }
    };
    report.fringes_superposition = fringes(report.rho_superposition);
    report.fringes_well = fringes(report.rho_well);

    const auto& ps = report.fringes_superposition.peaks;
    const auto& pw = report.fringes_well.peaks;
    report.same_peak_count = !ps.empty() && ps.size() == pw.size();
    if (report.same_peak_count) {
        for (std::size_t k = 0; k < ps.size(); ++k)
            report.max_position_offset =
                std::max(report.max_position_offset,
                         std::abs(ps[ps.size() - 1 - k].position - pw[pw.size() - 1 - k].position));
        report.positions_agree = report.max_position_offset <= report.grid_spacing;
    }

    auto half_width = [&](const FringeReport& f) {
        return f.innermost_ratio && *f.innermost_ratio >= options.ratio_low && *f.innermost_ratio <= options.ratio_high;
    };
    report.half_width_superposition = half_width(report.fringes_superposition);
    report.half_width_well = half_width(report.fringes_well);
    return report;
}

}  // namespace bohm
