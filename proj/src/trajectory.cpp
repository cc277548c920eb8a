#include "bohm/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "bohm/errors.hpp"
#include "bohm/grid_fields.hpp"

namespace bohm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Four-point Lagrange weights for nodes -1, 0, 1, 2 at fraction f in [0, 1).
std::array<double, 4> cubic_weights(double f) {
    return {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
            -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
}

}  // namespace

// ---------------------------------------------------------------------------
// Providers

AnalyticProvider::AnalyticProvider(SuperpositionSpec spec, double density_floor)
    : spec_(std::move(spec)), density_floor_(density_floor) {
    spec_.validate();
}

std::optional<Vec2> AnalyticProvider::velocity(Vec2 r, double t) const {
    return field_sample(spec_, r, t, density_floor_).v;
}

std::pair<double, double> AnalyticProvider::time_range() const {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

std::string AnalyticProvider::describe() const {
    std::ostringstream s;
    s << "analytic superposition of " << spec_.components.size() << " Gaussian packet(s), "
      << spec_.dimension << "D";
    return s.str();
}

GridProvider::GridProvider(std::span<const GridState> snapshots, Interpolation interpolation,
                           double density_floor)
    : interpolation_(interpolation) {
    if (snapshots.size() < 2) throw InvalidParameter("grid provider needs at least two snapshots");
    geometry_ = snapshots.front().geometry;
    boundary_ = snapshots.front().boundary;
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const GridState& s = snapshots[k];
        if (!(s.geometry == geometry_)) throw GeometryMismatch("snapshots use different grids");
        if (k > 0 && !(s.t > times_.back())) throw InvalidParameter("snapshot times must increase");
        times_.push_back(s.t);
        const std::vector<FieldSample> fields = synthesize_fields(s, density_floor);
        std::vector<Vec2> v(fields.size());
        std::vector<std::uint8_t> ok(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            ok[i] = fields[i].v.has_value();
            v[i] = fields[i].v.value_or(Vec2{});
        }
        velocity_.push_back(std::move(v));
        defined_.push_back(std::move(ok));
    }
}

std::pair<double, double> GridProvider::time_range() const { return {times_.front(), times_.back()}; }

std::string GridProvider::describe() const {
    std::ostringstream s;
    s << "grid snapshots (" << times_.size() << " from t=" << times_.front() << " to t=" << times_.back()
      << "), " << (interpolation_ == Interpolation::cubic ? "cubic" : "linear")
      << " in space, linear in time";
    return s.str();
}

std::optional<Vec2> GridProvider::spatial(std::size_t snapshot, Vec2 r) const {
    const GridGeometry& g = geometry_;
    const bool periodic = boundary_ == Boundary::periodic;
    const int reach = interpolation_ == Interpolation::cubic ? 1 : 0;

    std::array<std::vector<std::pair<std::size_t, double>>, 2> axis_terms;
    for (int a = 0; a < g.dimension; ++a) {
        const long n = long(g.points[a]);
        const double u = (r[a] - g.lower[a]) / g.spacing(a);
        const double base = std::floor(u);
        const double f = u - base;
        const long i0 = long(base);
        auto node_index = [&](long j) -> std::optional<std::size_t> {
            if (periodic) return std::size_t(((j % n) + n) % n);
            if (j < 0 || j >= n) return std::nullopt;
            return std::size_t(j);
        };
        if (!periodic && (i0 - reach < 0 || i0 + 1 + reach >= n))
            throw ProviderRangeExceeded("position outside the grid provider domain");
        if (interpolation_ == Interpolation::cubic) {
            const auto w = cubic_weights(f);
            for (int j = 0; j < 4; ++j) axis_terms[a].emplace_back(*node_index(i0 - 1 + j), w[j]);
        } else {
            axis_terms[a].emplace_back(*node_index(i0), 1.0 - f);
            axis_terms[a].emplace_back(*node_index(i0 + 1), f);
        }
    }

    const auto& v = velocity_[snapshot];
    const auto& ok = defined_[snapshot];
    Vec2 out{};
    if (g.dimension == 1) {
        for (auto [i, w] : axis_terms[0]) {
            if (!ok[i]) return std::nullopt;
            out += w * v[i];
        }
        return out;
    }
    for (auto [ix, wx] : axis_terms[0])
        for (auto [iy, wy] : axis_terms[1]) {
            const std::size_t i = g.index(ix, iy);
            if (!ok[i]) return std::nullopt;
            out += (wx * wy) * v[i];
        }
    return out;
}

std::optional<Vec2> GridProvider::velocity(Vec2 r, double t) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(times_.back()));
    if (t < times_.front() - slack || t > times_.back() + slack)
        throw ProviderRangeExceeded("time outside the snapshot range");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = it == times_.begin() ? 0 : std::size_t(it - times_.begin()) - 1;
    k = std::min(k, times_.size() - 2);
    if (interpolation_ == Interpolation::cubic && times_.size() >= 4) {
        // Four-point Lagrange through the snapshots around [t_k, t_k+1].
        const std::size_t first = std::min(k == 0 ? 0 : k - 1, times_.size() - 4);
        Vec2 out{};
        for (std::size_t j = first; j < first + 4; ++j) {
            double l = 1.0;
            for (std::size_t m = first; m < first + 4; ++m)
                if (m != j) l *= (t - times_[m]) / (times_[j] - times_[m]);
            const auto v = spatial(j, r);
            if (!v) return std::nullopt;
            out += l * *v;
        }
        return out;
    }
    const double w = std::clamp((t - times_[k]) / (times_[k + 1] - times_[k]), 0.0, 1.0);
    const auto a = spatial(k, r);
    const auto b = spatial(k + 1, r);
    if (!a || !b) return std::nullopt;
    return (1.0 - w) * *a + w * *b;
}

// ---------------------------------------------------------------------------
// Ensemble integration

bool TrajectoryEnsemble::alive(std::size_t path, std::size_t k) const {
    return !std::isnan(paths[path][k].x);
}

std::vector<double> TrajectoryEnsemble::column(std::size_t k, int axis) const {
    std::vector<double> out(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) out[i] = paths[i][k][axis];
    return out;
}

std::vector<double> TrajectoryEnsemble::path_coordinate(std::size_t path, int axis) const {
    std::vector<double> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) out[k] = paths[path][k][axis];
    return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * double(i) / double(n - 1);
    out.back() = b;
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the fifth- and fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct PathIntegrator {
    const VelocityProvider& provider;
    int dimension;
    double rel_tol;
    double abs_tol;
    std::size_t max_steps;
    double span;  // length of the whole output interval
    std::size_t steps_taken = 0;

    std::optional<Vec2> v(Vec2 r, double t) const { return provider.velocity(r, t); }

    double error_norm(Vec2 err, Vec2 y0, Vec2 y1) const {
        double worst = 0.0;
        for (int a = 0; a < dimension; ++a) {
            const double scale = abs_tol + rel_tol * std::max(std::abs(y0[a]), std::abs(y1[a]));
            worst = std::max(worst, std::abs(err[a]) / scale);
        }
        return worst;
    }

    // Advances (t, y, k1) to t_end.  Returns false on a nodal encounter,
    // leaving t and y at the last accepted point.
    bool advance(double& t, Vec2& y, Vec2& k1, double& h, double t_end) {
        const double h_min = 1e-13 * std::max(1.0, std::abs(t_end));
        while (t < t_end) {
            if (++steps_taken > max_steps) throw SolverFailure("trajectory integration exceeded the step budget");
            const bool last = t + h >= t_end;
            const double step = last ? t_end - t : h;

            std::optional<Vec2> k2, k3, k4, k5, k6, k7;
            Vec2 y_new{};
            bool stage_ok = (k2 = v(y + step * (a21 * k1), t + c2 * step)).has_value() &&
                            (k3 = v(y + step * (a31 * k1 + a32 * *k2), t + c3 * step)).has_value() &&
                            (k4 = v(y + step * (a41 * k1 + a42 * *k2 + a43 * *k3), t + c4 * step)).has_value() &&
                            (k5 = v(y + step * (a51 * k1 + a52 * *k2 + a53 * *k3 + a54 * *k4), t + c5 * step))
                                .has_value() &&
                            (k6 = v(y + step * (a61 * k1 + a62 * *k2 + a63 * *k3 + a64 * *k4 + a65 * *k5),
                                    t + step))
                                .has_value();
            if (stage_ok) {
                y_new = y + step * (b1 * k1 + b3 * *k3 + b4 * *k4 + b5 * *k5 + b6 * *k6);
                stage_ok = (k7 = v(y_new, t + step)).has_value();
            }
            if (!stage_ok) {
                h = 0.25 * step;
                if (h < h_min) return false;
                continue;
            }

            const Vec2 err = step * (e1 * k1 + e3 * *k3 + e4 * *k4 + e5 * *k5 + e6 * *k6 + e7 * *k7);
            // Error per unit step: the local error may use the fraction step/span
            // of the tolerance, so the global error scales faster than tol.
            const double en = error_norm(err, y, y_new) * span / step;
            const double factor = en > 0.0 ? std::clamp(0.9 * std::pow(en, -0.25), 0.2, 5.0) : 5.0;
            if (en <= 1.0) {
                t = last ? t_end : t + step;
                y = y_new;
                k1 = *k7;
                if (!last || factor < 1.0) h = step * factor;
            } else {
                h = step * std::max(factor, 0.1);
                if (h < h_min) return false;
            }
        }
        return true;
    }
};

}  // namespace

TrajectoryEnsemble integrate_ensemble(const VelocityProvider& provider, std::span<const Vec2> initial,
                                      std::span<const double> times, const IntegrationOptions& options,
                                      std::span<const double> weights) {
    if (times.empty()) throw InvalidParameter("empty output time base");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw InvalidParameter("output times must increase");
    if (!(options.rel_tol > 0.0)) throw InvalidParameter("tolerance must be positive");
    if (!weights.empty() && weights.size() != initial.size())
        throw InvalidParameter("one weight per initial position is required");
    const auto [t_lo, t_hi] = provider.time_range();
    if (times.front() < t_lo || times.back() > t_hi)
        throw ProviderRangeExceeded("requested span is outside the provider's time range");

    TrajectoryEnsemble ens;
    ens.dimension = provider.dimension();
    ens.times.assign(times.begin(), times.end());
    ens.initial_positions.assign(initial.begin(), initial.end());
    if (weights.empty()) {
        ens.weights.assign(initial.size(), initial.empty() ? 0.0 : 1.0 / double(initial.size()));
    } else {
        ens.weights.assign(weights.begin(), weights.end());
    }
    ens.paths.assign(initial.size(), std::vector<Vec2>(times.size(), Vec2{kNaN, kNaN}));

    const double abs_tol = options.abs_tol > 0.0 ? options.abs_tol : options.rel_tol;
    const double span = times.back() - times.front();
    for (std::size_t p = 0; p < initial.size(); ++p) {
        PathIntegrator integ{provider, ens.dimension, options.rel_tol, abs_tol, options.max_steps,
                             span > 0.0 ? span : 1.0};
        double t = times.front();
        Vec2 y = initial[p];
        ens.paths[p][0] = y;
        const auto v0 = provider.velocity(y, t);
        if (!v0) {
            ens.encounters.push_back({p, t, y});
            ens.paths[p][0] = Vec2{kNaN, kNaN};
            continue;
        }
        Vec2 k1 = *v0;
        double h = options.initial_step > 0.0
                       ? options.initial_step
                       : (times.size() > 1 ? std::min(span * 1e-3, (times[1] - times[0]) * 0.1) : 1e-3);
        for (std::size_t k = 1; k < times.size(); ++k) {
            if (!integ.advance(t, y, k1, h, times[k])) {
                ens.encounters.push_back({p, t, y});
                break;
            }
            ens.paths[p][k] = y;
        }
    }
    return ens;
}

TrajectoryEnsemble integrate_ensemble(const VelocityProvider& provider, std::span<const double> initial,
                                      std::span<const double> times, const IntegrationOptions& options) {
    std::vector<Vec2> r(initial.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = Vec2{initial[i], 0.0};
    return integrate_ensemble(provider, r, times, options);
}

// ---------------------------------------------------------------------------
// Initial conditions

DensityProfile1D initial_density(const SuperpositionSpec& spec, double t) {
    spec.validate();
    if (spec.dimension != 1) throw InvalidParameter("initial_density expects a 1D spec");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : spec.components) {
        const double center = c.center.x + c.v0.x * t;
        const double w = 12.0 * sigma_t(c, t, 0);
        lo = std::min(lo, center - w);
        hi = std::max(hi, center + w);
    }
    return DensityProfile1D{[spec, t](double x) { return std::norm(evaluate_psi(spec, x, t)); }, lo, hi};
}

namespace {

// Eight-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) sum += kGlWeights[i] * f(mid + half * kGlNodes[i]);
    return sum * half;
}

}  // namespace

DensityCdf::DensityCdf(const DensityProfile1D& rho, std::size_t cells) : rho_(rho) {
    if (!(rho.upper > rho.lower) || cells == 0) throw InvalidParameter("empty density support");
    edges_ = linspace(rho.lower, rho.upper, cells + 1);
    cumulative_.assign(cells + 1, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        const double piece = gauss_legendre(rho_.rho, edges_[c], edges_[c + 1]);
        if (!std::isfinite(piece) || piece < 0.0) throw UnnormalizableDensity("density is negative or not finite");
        cumulative_[c + 1] = cumulative_[c] + piece;
    }
    total_ = cumulative_.back();
    if (!(total_ > 0.0) || !std::isfinite(total_)) throw UnnormalizableDensity("density has no finite positive mass");
}

double DensityCdf::partial(std::size_t cell, double x) const { return gauss_legendre(rho_.rho, edges_[cell], x); }

double DensityCdf::operator()(double x) const {
    if (x <= edges_.front()) return 0.0;
    if (x >= edges_.back()) return 1.0;
    const std::size_t cell =
        std::min(std::size_t(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin()) - 1,
                 edges_.size() - 2);
    return (cumulative_[cell] + partial(cell, x)) / total_;
}

double DensityCdf::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw InvalidParameter("quantile must lie in (0, 1)");
    const double target = q * total_;
    std::size_t cell = std::size_t(std::upper_bound(cumulative_.begin(), cumulative_.end(), target) -
                                   cumulative_.begin());
    cell = std::clamp<std::size_t>(cell, 1, cumulative_.size() - 1) - 1;
    const double want = target - cumulative_[cell];
    double lo = edges_[cell], hi = edges_[cell + 1];
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = partial(cell, x) - want;
        if (g > 0.0) hi = x; else lo = x;
        const double d = rho_.rho(x);
        double next = d > 0.0 ? x - g / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return x;
}

std::vector<double> sample_initial_positions(const DensityProfile1D& rho, std::size_t n) {
    if (n == 0) throw InvalidParameter("need at least one sample");
    const DensityCdf cdf(rho);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = cdf.quantile((double(i) + 0.5) / double(n));
    return out;
}

std::vector<Vec2> sample_product_quantiles(const DensityProfile1D& rho_x, const DensityProfile1D& rho_y,
                                           std::size_t nx, std::size_t ny) {
    const std::vector<double> xs = sample_initial_positions(rho_x, nx);
    const std::vector<double> ys = sample_initial_positions(rho_y, ny);
    std::vector<Vec2> out;
    out.reserve(nx * ny);
    for (double x : xs)
        for (double y : ys) out.push_back(Vec2{x, y});
    return out;
}

std::vector<Vec2> sample_rejection(const std::function<double(Vec2)>& rho, Vec2 lower, Vec2 upper,
                                   std::size_t n, std::uint64_t seed) {
    constexpr std::size_t kProbe = 128;
    double peak = 0.0;
    for (std::size_t i = 0; i < kProbe; ++i)
        for (std::size_t j = 0; j < kProbe; ++j) {
            const Vec2 r{lower.x + (upper.x - lower.x) * (double(i) + 0.5) / kProbe,
                         lower.y + (upper.y - lower.y) * (double(j) + 0.5) / kProbe};
            const double v = rho(r);
            if (!std::isfinite(v) || v < 0.0) throw UnnormalizableDensity("density is negative or not finite");
            peak = std::max(peak, v);
        }
    if (!(peak > 0.0)) throw UnnormalizableDensity("density vanishes on the sampling box");
    const double envelope = 1.5 * peak;

    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> ux(lower.x, upper.x), uy(lower.y, upper.y), u01(0.0, 1.0);
    std::vector<Vec2> out;
    out.reserve(n);
    std::size_t tries = 0;
    while (out.size() < n) {
        if (++tries > 10'000'000 + 1000 * n) throw UnnormalizableDensity("rejection sampling made no progress");
        const Vec2 r{ux(gen), uy(gen)};
        if (u01(gen) * envelope < rho(r)) out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

Regime classify_regime(const GaussianParams& params, double t, const RegimeThresholds& thresholds) {
    const double ratio = std::abs(t) / params.tau(0);
    if (ratio < thresholds.huygens_below) return Regime::huygens;
    if (ratio > thresholds.fraunhofer_above) return Regime::fraunhofer;
    return Regime::fresnel;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::huygens: return "huygens";
        case Regime::fresnel: return "fresnel";
        case Regime::fraunhofer: return "fraunhofer";
    }
    return "unknown";
}

NonCrossingReport check_noncrossing(const TrajectoryEnsemble& ensemble) {
    NonCrossingReport report;
    const std::size_t n = ensemble.size();
    if (n < 2 || ensemble.times.empty()) return report;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ensemble.paths[a][0].x < ensemble.paths[b][0].x;
    });

    for (std::size_t k = 1; k < ensemble.times.size(); ++k) {
        std::size_t prev = n;  // last living path in reference order
        for (std::size_t idx : order) {
            if (!ensemble.alive(idx, k)) continue;
            if (prev != n) {
                const double xa = ensemble.paths[prev][k].x;
                const double xb = ensemble.paths[idx][k].x;
                const bool strictly_before = ensemble.paths[prev][0].x < ensemble.paths[idx][0].x;
                if (xa > xb || (strictly_before && xa == xb)) {
                    report.passed = false;
                    report.first_violation = CrossingViolation{prev, idx, k, ensemble.times[k]};
                    return report;
                }
            }
            prev = idx;
        }
    }
    return report;
}

std::vector<double> asymptotic_slope(const TrajectoryEnsemble& ensemble, double t_a, double t_b, int axis) {
    const auto& ts = ensemble.times;
    const double slack = 1e-12 * std::max(1.0, std::abs(ts.back()));
    if (ts.empty() || !(t_b > t_a) || t_a < ts.front() - slack || t_b > ts.back() + slack)
        throw WindowOutOfRange("slope window is not inside the integrated span");
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < ts.size(); ++k)
        if (ts[k] >= t_a - slack && ts[k] <= t_b + slack) idx.push_back(k);
    if (idx.size() < 2) throw WindowOutOfRange("slope window holds fewer than two samples");

    std::vector<double> slopes(ensemble.size(), kNaN);
    for (std::size_t p = 0; p < ensemble.size(); ++p) {
        double st = 0.0, sx = 0.0, m = 0.0;
        for (std::size_t k : idx) {
            if (!ensemble.alive(p, k)) continue;
            st += ts[k];
            sx += ensemble.paths[p][k][axis];
            m += 1.0;
        }
        if (m < 2.0) continue;
        const double tm = st / m, xm = sx / m;
        double num = 0.0, den = 0.0;
        for (std::size_t k : idx) {
            if (!ensemble.alive(p, k)) continue;
            num += (ts[k] - tm) * (ensemble.paths[p][k][axis] - xm);
            den += (ts[k] - tm) * (ts[k] - tm);
        }
        slopes[p] = num / den;
    }
    return slopes;
}

void write_ensemble_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
    out << (ensemble.dimension == 2 ? "path_id,t,x,y\n" : "path_id,t,x\n");
    char buf[128];
    for (std::size_t p = 0; p < ensemble.size(); ++p)
        for (std::size_t k = 0; k < ensemble.times.size(); ++k) {
            const Vec2 r = ensemble.paths[p][k];
            if (ensemble.dimension == 2)
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", p, ensemble.times[k], r.x, r.y);
            else
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", p, ensemble.times[k], r.x);
            out << buf;
        }
}

}  // namespace bohm
