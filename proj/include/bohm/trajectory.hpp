#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bohm/analytic_wave.hpp"
#include "bohm/grid.hpp"

namespace bohm {

/// Read-only source of the velocity field v(r, t).  Implementations must be
/// safe to query concurrently.
class VelocityProvider {
public:
    virtual ~VelocityProvider() = default;

    virtual int dimension() const = 0;
    /// Empty where the density does not exceed the provider's floor.
    /// Throws ProviderRangeExceeded outside time_range().
    virtual std::optional<Vec2> velocity(Vec2 r, double t) const = 0;
    virtual std::pair<double, double> time_range() const = 0;
    virtual std::string describe() const = 0;
};

class AnalyticProvider final : public VelocityProvider {
public:
    explicit AnalyticProvider(SuperpositionSpec spec, double density_floor = kDefaultDensityFloor);

    int dimension() const override { return spec_.dimension; }
    std::optional<Vec2> velocity(Vec2 r, double t) const override;
    std::pair<double, double> time_range() const override;
    std::string describe() const override;

    const SuperpositionSpec& spec() const { return spec_; }

private:
    SuperpositionSpec spec_;
    double density_floor_;
};

enum class Interpolation { bilinear, cubic };

/// Velocity synthesized from a sequence of grid snapshots: spatial
/// interpolation (linear or four-point cubic per axis) inside each snapshot.
/// In time the bilinear mode interpolates linearly between the bracketing
/// snapshots and the cubic mode uses four-point Lagrange weights.
class GridProvider final : public VelocityProvider {
public:
    GridProvider(std::span<const GridState> snapshots, Interpolation interpolation = Interpolation::cubic,
                 double density_floor = kDefaultDensityFloor);

    int dimension() const override { return geometry_.dimension; }
    std::optional<Vec2> velocity(Vec2 r, double t) const override;
    std::pair<double, double> time_range() const override;
    std::string describe() const override;

private:
    std::optional<Vec2> spatial(std::size_t snapshot, Vec2 r) const;

    GridGeometry geometry_;
    Boundary boundary_;
    Interpolation interpolation_;
    std::vector<double> times_;
    std::vector<std::vector<Vec2>> velocity_;
    std::vector<std::vector<std::uint8_t>> defined_;
};

struct NodalEncounter {
    std::size_t path = 0;
    double t = 0.0;
    Vec2 position{};
};

/// N paths sampled on a shared time base.  Paths that met a nodal region are
/// NaN from the first output time after the encounter.
struct TrajectoryEnsemble {
    int dimension = 1;
    std::vector<double> times;
    std::vector<std::vector<Vec2>> paths;  // paths[i][k] = position of path i at times[k]
    std::vector<double> weights;
    std::vector<Vec2> initial_positions;
    std::vector<NodalEncounter> encounters;

    std::size_t size() const { return paths.size(); }
    bool alive(std::size_t path, std::size_t k) const;
    /// Positions of every path at time index k (axis 0).
    std::vector<double> column(std::size_t k, int axis = 0) const;
    /// One coordinate of one path over the whole time base.
    std::vector<double> path_coordinate(std::size_t path, int axis = 0) const;
};

struct IntegrationOptions {
    double rel_tol = 1e-8;
    double abs_tol = -1.0;  // negative: same as rel_tol (in length units)
    double initial_step = 0.0;  // zero: chosen from the output spacing
    std::size_t max_steps = 5'000'000;
};

/// Integrates dr/dt = v(r, t) for every initial position with an adaptive
/// Dormand-Prince 5(4) pair; outputs are taken exactly at `times`.
/// Empty `weights` means equal weights 1/N.
TrajectoryEnsemble integrate_ensemble(const VelocityProvider& provider, std::span<const Vec2> initial,
                                      std::span<const double> times,
                                      const IntegrationOptions& options = {},
                                      std::span<const double> weights = {});

TrajectoryEnsemble integrate_ensemble(const VelocityProvider& provider, std::span<const double> initial,
                                      std::span<const double> times,
                                      const IntegrationOptions& options = {});

std::vector<double> linspace(double a, double b, std::size_t n);

// ---------------------------------------------------------------------------
// Initial conditions

struct DensityProfile1D {
    std::function<double(double)> rho;
    double lower = 0.0;
    double upper = 1.0;
};

/// |Psi(x, 0)|^2 of a 1D spec on [min center - 12 sigma0, max center + 12 sigma0].
DensityProfile1D initial_density(const SuperpositionSpec& spec, double t = 0.0);

/// Position i (1-based) at the (i - 1/2)/n quantile of rho.  Throws
/// UnnormalizableDensity when rho has no positive finite mass.
std::vector<double> sample_initial_positions(const DensityProfile1D& rho, std::size_t n);

/// Product of per-axis quantiles for separable densities (nx * ny points).
std::vector<Vec2> sample_product_quantiles(const DensityProfile1D& rho_x, const DensityProfile1D& rho_y,
                                           std::size_t nx, std::size_t ny);

/// Rejection sampling inside [lower, upper] with a fixed-seed generator.
std::vector<Vec2> sample_rejection(const std::function<double(Vec2)>& rho, Vec2 lower, Vec2 upper,
                                   std::size_t n, std::uint64_t seed);

/// Cumulative distribution of a 1D density, for equivariance checks.
class DensityCdf {
public:
    explicit DensityCdf(const DensityProfile1D& rho, std::size_t cells = 4096);

    double operator()(double x) const;
    double quantile(double q) const;
    double total_mass() const { return total_; }

private:
    double partial(std::size_t cell, double x) const;

    DensityProfile1D rho_;
    std::vector<double> edges_;
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

// ---------------------------------------------------------------------------
// Regimes and ensemble diagnostics

enum class Regime { huygens, fresnel, fraunhofer };

struct RegimeThresholds {
    double huygens_below = 0.1;     // t < 0.1 tau
    double fraunhofer_above = 10.0;  // t > 10 tau
};

Regime classify_regime(const GaussianParams& params, double t, const RegimeThresholds& thresholds = {});
std::string to_string(Regime regime);

struct CrossingViolation {
    std::size_t path_a = 0;
    std::size_t path_b = 0;
    std::size_t time_index = 0;
    double t = 0.0;
};

struct NonCrossingReport {
    bool passed = true;
    std::optional<CrossingViolation> first_violation;
};

/// Passes iff the permutation sorting (living) paths by position is the same
/// at every time index as at index 0.
NonCrossingReport check_noncrossing(const TrajectoryEnsemble& ensemble);

/// Least-squares slope of every path over output times inside [t_a, t_b].
/// Throws WindowOutOfRange if the window is not inside the time base or holds
/// fewer than two samples.
std::vector<double> asymptotic_slope(const TrajectoryEnsemble& ensemble, double t_a, double t_b, int axis = 0);

// ---------------------------------------------------------------------------
// Export

/// One row per (path, time): path_id,t,x[,y].
void write_ensemble_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);

}  // namespace bohm
