#pragma once

// Time-dependent square well plus hard wall that lets a single packet mimic
// the half-line interference pattern of two counter-propagating packets.
//
//   V(x, t) = 0          x < -w(t)
//           = -V0(t)     -w(t) <= x <= 0
//           = infinite   x > 0
//
//   w(t)  = pi sigma_t^2 / (2 p0 sigma0^2 / hbar + (hbar t / 2 m sigma0^2) x0)
//   V0(t) = 2 hbar^2 / (m w(t)^2)
//
// x0 is the initial distance of the incident packet center from the wall.

#include <cstdint>
#include <vector>

#include "bohm/analysis.hpp"
#include "bohm/analytic_wave.hpp"
#include "bohm/grid.hpp"

namespace bohm {

struct EffectiveWellParams {
    GaussianParams base;     // incident packet: m, hbar, sigma0, v0 (p0 = m v0)
    double x0_offset = 0.0;  // distance of the incident packet center from the wall

    static constexpr double wall_position = 0.0;

    double p0() const { return base.momentum(0); }

    /// Throws InvalidParameter for negative momentum and DegenerateWell when
    /// p0 = 0 and x0_offset = 0 (the width is undefined at t = 0).
    void validate() const;

    /// The incident packet (center -x0_offset, moving towards the wall).
    GaussianParams incident() const;
    /// Incident packet plus its mirror image behind the wall.
    SuperpositionSpec mirrored_superposition() const;
};

/// Well width w(t) (the well spans [-w, 0]).  Throws DegenerateWell when the
/// denominator is not positive.
double well_width(const EffectiveWellParams& params, double t);

/// Well depth V0(t) = 2 hbar^2 / (m w(t)^2).
double well_depth(const EffectiveWellParams& params, double t);

struct WellNodes {
    std::vector<double> values;
    std::vector<std::uint8_t> wall;  // 1 where psi is pinned to zero (x >= 0)
};

/// Node potentials at time t.  `include_well = false` keeps the wall but drops
/// the attractive well (ablation).  The geometry must be 1D with x = 0 on a node.
WellNodes potential_on_grid(const EffectiveWellParams& params, const GridGeometry& geometry,
                            double t, bool include_well = true);

struct WellComparisonOptions {
    double dt = 0.005;
    bool include_well = true;
    double min_prominence = 0.05;
    double ratio_low = 0.4;
    double ratio_high = 0.6;
};

/// Side-by-side result of the single-packet-plus-well run and the analytic
/// two-packet superposition on the nodes x <= 0.
struct WellComparisonReport {
    double t_final = 0.0;
    double grid_spacing = 0.0;
    std::vector<double> x;
    std::vector<double> rho_superposition;
    std::vector<double> rho_well;
    FringeReport fringes_superposition;
    FringeReport fringes_well;
    bool same_peak_count = false;
    double max_position_offset = 0.0;  // over peaks paired from the wall outwards
    bool positions_agree = false;      // same count and every offset within one cell
    bool half_width_superposition = false;
    bool half_width_well = false;
    double norm_drift = 0.0;  // |1 - norm| of the well run

    bool passed() const { return positions_agree && half_width_superposition && half_width_well; }
};

WellComparisonReport compare_with_superposition(const EffectiveWellParams& params,
                                                const GridGeometry& geometry, double t_final,
                                                const WellComparisonOptions& options = {});

}  // namespace bohm
