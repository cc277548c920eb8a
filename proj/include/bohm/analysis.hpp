#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bohm/analytic_wave.hpp"
#include "bohm/grid.hpp"

namespace bohm {

struct TrajectoryEnsemble;
class DensityCdf;

// ---------------------------------------------------------------------------
// Fringes

struct Peak {
    double position = 0.0;
    double height = 0.0;
    double fwhm = 0.0;
    double prominence = 0.0;
    std::size_t index = 0;
    bool at_boundary = false;  // maximum on the first/last sample; fwhm is one-sided
};

/// Which end of the sampled interval touches the reflecting wall (or symmetry
/// axis).  The innermost peak is the one nearest that end.
enum class WallSide { none, lower, upper };

struct FringeReport {
    std::vector<Peak> peaks;  // sorted by position
    double spacing_estimate = 0.0;  // median distance between neighbouring peaks
    /// FWHM of the wall-adjacent peak over the median FWHM of the others;
    /// present with at least three peaks and a wall side.
    std::optional<double> innermost_ratio;
};

/// Local maxima of uniformly sampled rho whose prominence is at least
/// `min_prominence` times the global maximum.  A width is the distance between
/// the half-height crossings (linear interpolation), each searched no further
/// than the adjacent valley.  A maximum on the first or last sample counts as
/// a peak whose width is measured from that sample to its single crossing.
/// Throws TooFewPeaks with fewer than two peaks.
FringeReport find_fringes(std::span<const double> x, std::span<const double> rho, double min_prominence = 0.05,
                          WallSide wall = WallSide::none);

/// Shape of a final-time two-packet density.
enum class DensityPattern { separated_lobes, fringes, other };

struct PatternReport {
    DensityPattern pattern = DensityPattern::other;
    std::size_t peak_count = 0;
    double lobe_separation = 0.0;  // distance between the two peaks (two-peak case)
    double gap_ratio = 1.0;        // minimum between the two peaks over the global maximum
};

/// separated_lobes: exactly two peaks more than 4 sigma_t apart with the
/// density between them below 1e-3 of the maximum.  fringes: five or more
/// peaks.  Anything else (including fewer than two peaks) is `other`.
PatternReport classify_pattern(std::span<const double> x, std::span<const double> rho, double sigma_t,
                               double min_prominence = 0.05);

std::string to_string(DensityPattern pattern);

// ---------------------------------------------------------------------------
// Spreading fit

struct SigmaFit {
    double sigma0 = 0.0;
    double tau = 0.0;
    double rms_relative_residual = 0.0;  // RMS of (model - data) / data over the variances
    bool model_mismatch = false;        // residual above the threshold
};

/// Least squares of variance(t) = sigma0^2 (1 + (t/tau)^2).  Needs at least five
/// samples; throws FitDiverged when the fitted sigma0^2 or sigma0^2/tau^2 is
/// not positive.
SigmaFit fit_sigma(std::span<const double> times, std::span<const double> variances,
                   double mismatch_threshold = 1e-3);

/// Same fit on the variance of grid snapshots along `axis`.
SigmaFit fit_sigma(std::span<const GridState> snapshots, int axis = 0, double mismatch_threshold = 1e-3);

// ---------------------------------------------------------------------------
// Continuity

/// L2 norm over interior nodes of (rho_next - rho_prev)/dt + div J_mid, J_mid
/// being the mean of the two currents.  Expected to scale as O(dt^2) for exact
/// states.  Throws GeometryMismatch.
double continuity_residual(const GridState& prev, const GridState& next);

/// Same norm from precomputed arrays (used for negative controls).
double continuity_residual(const GridGeometry& geometry, std::span<const double> rho_prev,
                           std::span<const double> rho_next, std::span<const double> div_j_mid, double dt);

// ---------------------------------------------------------------------------
// Vortices

struct Vortex {
    Vec2 position{};  // plaquette center, or the node itself when psi vanishes exactly there
    Vec2 core{};      // zero of the interpolated psi (periodic states), else the plaquette center
    int winding = 0;
    double circulation = 0.0;  // loop integral of v . dl
    double loop_half_width = 0.0;  // circle radius or half side of the square loop
};

struct VortexReport {
    std::vector<Vortex> vortices;
    std::size_t plaquettes_checked = 0;
    std::size_t plaquettes_skipped = 0;  // below the density floor
};

struct VortexOptions {
    /// Plaquettes whose corner densities all lie below this fraction of the
    /// peak density are not examined.
    double relative_density_floor = 1e-6;
    /// Largest circulation loop, in cells.  Periodic states use a circle
    /// around the interpolated core; others a square loop of grid nodes.
    int max_loop_cells = 4;
};

/// Phase winding of psi around every plaquette of a 2D state.
VortexReport detect_vortices(const GridState& state, const VortexOptions& options = {});

// ---------------------------------------------------------------------------
// Ensemble checks

struct EhrenfestReport {
    std::vector<double> mean;  // weighted mean position per output time
    std::vector<double> classical;
    double max_deviation = 0.0;
    std::size_t worst_index = 0;
    bool passed = false;
};

/// Weighted ensemble mean against x_c + v0 t along axis 0.
EhrenfestReport ehrenfest_check(const TrajectoryEnsemble& ensemble, const GaussianParams& params,
                                double tolerance = 1e-6);

/// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::span<const double> sample, const DensityCdf& cdf);

}  // namespace bohm
