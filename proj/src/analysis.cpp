#include "bohm/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "bohm/errors.hpp"
#include "bohm/grid_fields.hpp"
#include "bohm/trajectory.hpp"
#include "fft.hpp"

namespace bohm {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + long(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + long(mid));
    return 0.5 * (lower + upper);
}

// Topographic prominence of the maximum at i (scans to the first higher sample
// or the end on each side).
double prominence(std::span<const double> rho, std::size_t i) {
    const double h = rho[i];
    const std::size_t n = rho.size();
    std::optional<double> left, right;
    if (i > 0) {
        double lo = h;
        for (std::size_t j = i; j-- > 0;) {
            if (rho[j] > h) break;
            lo = std::min(lo, rho[j]);
        }
        left = lo;
    }
    if (i + 1 < n) {
        double lo = h;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rho[j] > h) break;
            lo = std::min(lo, rho[j]);
        }
        right = lo;
    }
    const double base = std::max(left.value_or(-INFINITY), right.value_or(-INFINITY));
    return h - base;
}

}  // namespace

FringeReport find_fringes(std::span<const double> x, std::span<const double> rho, double min_prominence,
                          WallSide wall) {
    const std::size_t n = rho.size();
    if (x.size() != n) throw InvalidParameter("positions and densities differ in length");
    if (n < 3) throw TooFewPeaks("fewer than three samples");
    if (!(min_prominence > 0.0 && min_prominence < 1.0)) throw InvalidParameter("prominence must lie in (0, 1)");
    const double dx = (x[n - 1] - x[0]) / double(n - 1);
    if (!(dx > 0.0)) throw InvalidParameter("positions must increase");
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((x[i] - x[i - 1]) - dx) > 1e-6 * dx) throw InvalidParameter("sampling is not uniform");

    const double peak_max = *std::max_element(rho.begin(), rho.end());
    if (!(peak_max > 0.0)) throw TooFewPeaks("density has no positive maximum");

    // Candidate maxima (plateaus collapse to their middle sample).
    std::vector<std::size_t> candidates;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && rho[j + 1] == rho[i]) ++j;
        const bool left_ok = i == 0 || rho[i - 1] < rho[i];
        const bool right_ok = j == n - 1 || rho[j + 1] < rho[i];
        if (left_ok && right_ok && !(i == 0 && j == n - 1)) candidates.push_back((i + j) / 2);
        i = j + 1;
    }

    std::vector<Peak> peaks;
    for (std::size_t c : candidates) {
        const double p = prominence(rho, c);
        if (p >= min_prominence * peak_max) {
            Peak pk;
            pk.index = c;
            pk.position = x[c];
            pk.height = rho[c];
            pk.prominence = p;
            pk.at_boundary = c == 0 || c == n - 1;
            peaks.push_back(pk);
        }
    }
    if (peaks.size() < 2) throw TooFewPeaks("fewer than two fringes above the prominence threshold");

    auto valley = [&](std::size_t a, std::size_t b) {  // argmin of rho on [a, b]
        return std::size_t(std::min_element(rho.begin() + long(a), rho.begin() + long(b) + 1) - rho.begin());
    };

    for (std::size_t k = 0; k < peaks.size(); ++k) {
        Peak& pk = peaks[k];
        const std::size_t c = pk.index;
        const double half = 0.5 * pk.height;
        const std::size_t lo_limit = k == 0 ? 0 : valley(peaks[k - 1].index, c);
        const std::size_t hi_limit = k + 1 == peaks.size() ? n - 1 : valley(c, peaks[k + 1].index);

        double left = x[lo_limit];
        for (std::size_t j = c; j > lo_limit; --j)
            if (rho[j - 1] < half) {
                const double f = (rho[j] - half) / (rho[j] - rho[j - 1]);
                left = x[j] - f * dx;
                break;
            }
        double right = x[hi_limit];
        for (std::size_t j = c; j < hi_limit; ++j)
            if (rho[j + 1] < half) {
                const double f = (rho[j] - half) / (rho[j] - rho[j + 1]);
                right = x[j] + f * dx;
                break;
            }
        pk.fwhm = right - left;
        if (!(pk.fwhm > 0.0)) pk.fwhm = dx;
    }

    FringeReport report;
    report.peaks = std::move(peaks);
    std::vector<double> gaps;
    for (std::size_t k = 1; k < report.peaks.size(); ++k)
        gaps.push_back(report.peaks[k].position - report.peaks[k - 1].position);
    report.spacing_estimate = median(gaps);

    if (wall != WallSide::none && report.peaks.size() >= 3) {
        const std::size_t inner = wall == WallSide::upper ? report.peaks.size() - 1 : 0;
        std::vector<double> others;
        for (std::size_t k = 0; k < report.peaks.size(); ++k)
            if (k != inner) others.push_back(report.peaks[k].fwhm);
        report.innermost_ratio = report.peaks[inner].fwhm / median(others);
    }
    return report;
}

PatternReport classify_pattern(std::span<const double> x, std::span<const double> rho, double sigma_t,
                               double min_prominence) {
    PatternReport out;
    FringeReport f;
    try {
        f = find_fringes(x, rho, min_prominence);
    } catch (const TooFewPeaks&) {
        return out;
    }
    out.peak_count = f.peaks.size();
    if (f.peaks.size() >= 5) {
        out.pattern = DensityPattern::fringes;
    } else if (f.peaks.size() == 2) {
        const Peak& a = f.peaks[0];
        const Peak& b = f.peaks[1];
        out.lobe_separation = b.position - a.position;
        const double gap = *std::min_element(rho.begin() + long(a.index), rho.begin() + long(b.index) + 1);
        out.gap_ratio = gap / *std::max_element(rho.begin(), rho.end());
        if (out.lobe_separation > 4.0 * sigma_t && out.gap_ratio < 1e-3) out.pattern = DensityPattern::separated_lobes;
    }
    return out;
}

std::string to_string(DensityPattern pattern) {
    switch (pattern) {
        case DensityPattern::separated_lobes: return "separated_lobes";
        case DensityPattern::fringes: return "fringes";
        case DensityPattern::other: return "other";
    }
    return "other";
}

// ---------------------------------------------------------------------------

SigmaFit fit_sigma(std::span<const double> times, std::span<const double> variances, double mismatch_threshold) {
    if (times.size() != variances.size()) throw InvalidParameter("times and variances differ in length");
    if (times.size() < 5) throw InvalidParameter("spreading fit needs at least five snapshots");

    // Weighted linear least squares of var = a + b t^2 with weights 1/var^2,
    // i.e. minimal relative residuals.
    double s00 = 0, s01 = 0, s11 = 0, r0 = 0, r1 = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double v = variances[i];
        if (!(v > 0.0) || !std::isfinite(v)) throw FitDiverged("variance is not positive and finite");
        const double w = 1.0 / (v * v);
        const double t2 = times[i] * times[i];
        s00 += w;
        s01 += w * t2;
        s11 += w * t2 * t2;
        r0 += w * v;
        r1 += w * v * t2;
    }
    const double det = s00 * s11 - s01 * s01;
    if (!(std::abs(det) > 0.0)) throw FitDiverged("spreading fit is singular (need distinct times)");
    const double a = (r0 * s11 - r1 * s01) / det;
    const double b = (s00 * r1 - s01 * r0) / det;
    if (!(a > 0.0) || !(b > 0.0)) throw FitDiverged("fitted spreading parameters are not positive");

    SigmaFit fit;
    fit.sigma0 = std::sqrt(a);
    fit.tau = std::sqrt(a / b);
    double ss = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double rel = (a + b * times[i] * times[i] - variances[i]) / variances[i];
        ss += rel * rel;
    }
    fit.rms_relative_residual = std::sqrt(ss / double(times.size()));
    fit.model_mismatch = fit.rms_relative_residual > mismatch_threshold;
    return fit;
}

SigmaFit fit_sigma(std::span<const GridState> snapshots, int axis, double mismatch_threshold) {
    std::vector<double> t, var;
    for (const GridState& s : snapshots) {
        t.push_back(s.t);
        var.push_back(axis_moments(s.geometry, s.density(), axis).variance);
    }
    return fit_sigma(t, var, mismatch_threshold);
}

// ---------------------------------------------------------------------------

double continuity_residual(const GridState& prev, const GridState& next) {
    if (!(prev.geometry == next.geometry)) throw GeometryMismatch("snapshots use different grids");
    const double dt = next.t - prev.t;
    if (!(dt > 0.0)) throw InvalidParameter("snapshots must be in increasing time order");
    const std::vector<Vec2> jp = grid_current(prev);
    const std::vector<Vec2> jn = grid_current(next);
    std::vector<Vec2> mid(jp.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (jp[i] + jn[i]);
    const std::vector<double> div = grid_divergence(next.geometry, mid, next.boundary);
    return continuity_residual(next.geometry, prev.density(), next.density(), div, dt);
}

double continuity_residual(const GridGeometry& geometry, std::span<const double> rho_prev,
                           std::span<const double> rho_next, std::span<const double> div_j_mid, double dt) {
    const std::size_t n = geometry.size();
    if (rho_prev.size() != n || rho_next.size() != n || div_j_mid.size() != n)
        throw GeometryMismatch("array sizes do not match the grid");
    if (!(dt > 0.0)) throw InvalidParameter("time step must be positive");
    constexpr std::size_t kEdge = 2;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        bool interior = true;
        for (int a = 0; a < geometry.dimension; ++a) {
            const std::size_t ia = geometry.dimension == 1 ? i : (a == 0 ? i / geometry.points[1] : i % geometry.points[1]);
            interior = interior && ia >= kEdge && ia + kEdge < geometry.points[a];
        }
        if (!interior) continue;
        const double r = (rho_next[i] - rho_prev[i]) / dt + div_j_mid[i];
        sum += r * r;
    }
    return std::sqrt(sum * geometry.cell_volume());
}

// ---------------------------------------------------------------------------

namespace {

// Composite Simpson (with a 3/8 panel for odd interval counts) of samples at
// unit spacing h.
double line_integral(const std::vector<double>& f, double h) {
    const std::size_t m = f.size() - 1;  // intervals
    if (m == 1) return 0.5 * h * (f[0] + f[1]);
    if (m == 2) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
    std::size_t simpson = m % 2 == 0 ? m : m - 3;
    double s = 0.0;
    for (std::size_t k = 0; k + 2 <= simpson; k += 2) s += h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
    if (simpson < m) {
        const std::size_t k = simpson;
        s += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    }
    return s;
}

}  // namespace

namespace {

// Trigonometric interpolant of a periodic 2D psi: value and gradient at any
// point.  The Nyquist bins are dropped.
class SpectralField {
public:
    explicit SpectralField(const GridState& s) : g_(s.geometry), coeffs_(s.psi) {
        const detail::Fft fft(g_);
        fft.forward(coeffs_);
        const double inv_n = 1.0 / double(g_.size());
        for (cplx& c : coeffs_) c *= inv_n;
        for (int a = 0; a < 2; ++a) {
            k_[a].resize(g_.points[a]);
            for (std::size_t i = 0; i < g_.points[a]; ++i)
                k_[a][i] = 2 * i == g_.points[a] ? 0.0 : fft.wavenumber(a, i);
        }
    }

    // psi, d psi/dx, d psi/dy
    std::array<cplx, 3> at(Vec2 r) const {
        const std::size_t nx = g_.points[0], ny = g_.points[1];
        std::vector<cplx> ey(ny);
        for (std::size_t b = 0; b < ny; ++b) ey[b] = std::polar(1.0, k_[1][b] * (r.y - g_.lower[1]));
        std::array<cplx, 3> out{};
        for (std::size_t a = 0; a < nx; ++a) {
            if (k_[0][a] == 0.0 && 2 * a == nx) continue;
            cplx row = 0.0, row_y = 0.0;
            const cplx* c = coeffs_.data() + a * ny;
            for (std::size_t b = 0; b < ny; ++b) {
                const cplx t = c[b] * ey[b];
                row += t;
                row_y += k_[1][b] * t;
            }
            const cplx ex = std::polar(1.0, k_[0][a] * (r.x - g_.lower[0]));
            out[0] += ex * row;
            out[1] += cplx(0.0, k_[0][a]) * ex * row;
            out[2] += cplx(0.0, 1.0) * ex * row_y;
        }
        return out;
    }

private:
    GridGeometry g_;
    std::vector<cplx> coeffs_;
    std::array<std::vector<double>, 2> k_;
};

// Newton iteration for the zero of psi near `start`; falls back to `start`.
Vec2 refine_core(const SpectralField& f, Vec2 start, double h) {
    Vec2 r = start;
    for (int it = 0; it < 20; ++it) {
        const auto [psi, dx, dy] = f.at(r);
        // [Re dx Re dy; Im dx Im dy] * d = -[Re psi; Im psi]
        const double det = dx.real() * dy.imag() - dy.real() * dx.imag();
        if (!(std::abs(det) > 0.0)) return start;
        const Vec2 d{-(dy.imag() * psi.real() - dy.real() * psi.imag()) / det,
                     -(-dx.imag() * psi.real() + dx.real() * psi.imag()) / det};
        r += d;
        if ((r - start).norm() > h) return start;
        if (d.norm() < 1e-12 * h) break;
    }
    return r;
}

}  // namespace

VortexReport detect_vortices(const GridState& state, const VortexOptions& options) {
    const GridGeometry& g = state.geometry;
    if (g.dimension != 2) throw InvalidParameter("vortex detection needs a 2D state");
    const std::size_t nx = g.points[0], ny = g.points[1];
    const std::vector<double> rho = state.density();
    const double floor = options.relative_density_floor * *std::max_element(rho.begin(), rho.end());
    const double hx = g.spacing(0), hy = g.spacing(1);

    VortexReport report;
    // A hit is either a plaquette (lower-left node ix, iy) or, when psi vanishes
    // exactly on a node, that node itself with the winding taken around its
    // ring of eight neighbours.
    struct Hit {
        std::size_t ix, iy;
        int winding;
        bool reported;
        bool on_node;
    };
    const double peak = *std::max_element(rho.begin(), rho.end());
    auto vanishes = [&](std::size_t n) { return !(rho[n] > 1e-28 * peak); };
    auto winding_of = [&](std::span<const std::size_t> loop) {
        double total = 0.0;
        for (std::size_t k = 0; k < loop.size(); ++k)
            total += std::arg(state.psi[loop[(k + 1) % loop.size()]] * std::conj(state.psi[loop[k]]));
        return int(std::lround(total / (2.0 * std::numbers::pi)));
    };
    std::vector<Hit> hits;
    for (std::size_t ix = 0; ix + 1 < nx; ++ix)
        for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
            const std::size_t c[4] = {g.index(ix, iy), g.index(ix + 1, iy), g.index(ix + 1, iy + 1),
                                      g.index(ix, iy + 1)};
            const bool above = std::max({rho[c[0]], rho[c[1]], rho[c[2]], rho[c[3]]}) >= floor;
            above ? ++report.plaquettes_checked : ++report.plaquettes_skipped;
            if (std::any_of(std::begin(c), std::end(c), vanishes)) continue;
            const int w = winding_of(c);
            if (w != 0) hits.push_back({ix, iy, w, above, false});
        }
    for (std::size_t ix = 1; ix + 1 < nx; ++ix)
        for (std::size_t iy = 1; iy + 1 < ny; ++iy) {
            if (!vanishes(g.index(ix, iy))) continue;
            // Counter-clockwise ring starting at the lower-left neighbour.
            const std::size_t ring[8] = {g.index(ix - 1, iy - 1), g.index(ix, iy - 1), g.index(ix + 1, iy - 1),
                                         g.index(ix + 1, iy),     g.index(ix + 1, iy + 1), g.index(ix, iy + 1),
                                         g.index(ix - 1, iy + 1), g.index(ix - 1, iy)};
            if (std::any_of(std::begin(ring), std::end(ring), vanishes)) continue;  // nodal line, not a point
            const int w = winding_of(ring);
            double top = 0.0;
            for (std::size_t n : ring) top = std::max(top, rho[n]);
            if (w != 0) hits.push_back({ix, iy, w, top >= floor, true});
        }

    auto center = [&](const Hit& h) {
        if (h.on_node) return Vec2{g.coordinate(0, h.ix), g.coordinate(1, h.iy)};
        return Vec2{g.coordinate(0, h.ix) + 0.5 * hx, g.coordinate(1, h.iy) + 0.5 * hy};
    };
    const double h_min = std::min(hx, hy);

    std::optional<SpectralField> spectral;
    std::vector<Vec2> current;
    if (state.boundary == Boundary::periodic) {
        if (std::any_of(hits.begin(), hits.end(), [](const Hit& h) { return h.reported; })) spectral.emplace(state);
    } else if (!hits.empty()) {
        current = grid_current(state);
    }

    std::vector<Vec2> cores(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i)
        cores[i] = spectral && hits[i].reported ? refine_core(*spectral, center(hits[i]), h_min) : center(hits[i]);

    for (std::size_t i = 0; i < hits.size(); ++i) {
        const Hit& h = hits[i];
        if (!h.reported) continue;
        double nearest = INFINITY;
        for (std::size_t j = 0; j < hits.size(); ++j)
            if (j != i) nearest = std::min(nearest, (cores[j] - cores[i]).norm());

        Vortex v;
        v.position = center(h);
        v.core = cores[i];
        v.winding = h.winding;

        if (spectral) {
            // Circle around the refined core, clear of every other singularity.
            const double radius = std::min(options.max_loop_cells * h_min, 0.5 * nearest);
            constexpr int kPoints = 128;
            const double hbar_m = state.units.hbar / state.units.mass;
            double circ = 0.0;
            for (int k = 0; k < kPoints; ++k) {
                const double th = 2.0 * std::numbers::pi * k / kPoints;
                const Vec2 tangent{-std::sin(th), std::cos(th)};
                const auto [psi, dx, dy] = spectral->at(cores[i] + radius * Vec2{std::cos(th), std::sin(th)});
                const double r2 = std::norm(psi);
                if (!(r2 > 0.0)) continue;
                const Vec2 vel = (hbar_m / r2) * Vec2{(std::conj(psi) * dx).imag(), (std::conj(psi) * dy).imag()};
                circ += vel.dot(tangent);
            }
            v.circulation = circ * radius * 2.0 * std::numbers::pi / kPoints;
            v.loop_half_width = radius;
        } else {
            // Square loop of grid nodes around the plaquette (or around the node).
            const int lo_x = int(h.ix), lo_y = int(h.iy);
            const int hi_x = h.on_node ? lo_x : lo_x + 1, hi_y = h.on_node ? lo_y : lo_y + 1;
            const int r_min = h.on_node ? 1 : 0;
            int r = std::min({options.max_loop_cells, lo_x, lo_y, int(nx) - 1 - hi_x, int(ny) - 1 - hi_y});
            const double half_extent = h.on_node ? 0.0 : 0.5;
            while (r > r_min && (double(r) + half_extent) * h_min > 0.5 * nearest) --r;
            r = std::max(r, 0);
            const std::size_t x0 = std::size_t(lo_x - r), x1 = std::size_t(hi_x + r);
            const std::size_t y0 = std::size_t(lo_y - r), y1 = std::size_t(hi_y + r);
            auto velocity = [&](std::size_t ix, std::size_t iy) {
                const std::size_t n = g.index(ix, iy);
                return rho[n] > 0.0 ? (1.0 / rho[n]) * current[n] : Vec2{};
            };
            // Counter-clockwise: bottom (+x), right (+y), top (-x), left (-y).
            std::vector<double> f;
            double circ = 0.0;
            for (std::size_t ix = x0; ix <= x1; ++ix) f.push_back(velocity(ix, y0).x);
            circ += line_integral(f, hx);
            f.clear();
            for (std::size_t iy = y0; iy <= y1; ++iy) f.push_back(velocity(x1, iy).y);
            circ += line_integral(f, hy);
            f.clear();
            for (std::size_t ix = x1 + 1; ix-- > x0;) f.push_back(-velocity(ix, y1).x);
            circ += line_integral(f, hx);
            f.clear();
            for (std::size_t iy = y1 + 1; iy-- > y0;) f.push_back(-velocity(x0, iy).y);
            circ += line_integral(f, hy);
            v.circulation = circ;
            v.loop_half_width = (double(r) + half_extent) * h_min;
        }
        report.vortices.push_back(v);
    }
    return report;
}

// ---------------------------------------------------------------------------

EhrenfestReport ehrenfest_check(const TrajectoryEnsemble& ensemble, const GaussianParams& params, double tolerance) {
    EhrenfestReport report;
    for (std::size_t k = 0; k < ensemble.times.size(); ++k) {
        double sw = 0.0, sx = 0.0;
        for (std::size_t p = 0; p < ensemble.size(); ++p) {
            if (!ensemble.alive(p, k)) continue;
            sw += ensemble.weights[p];
            sx += ensemble.weights[p] * ensemble.paths[p][k].x;
        }
        const double mean = sw > 0.0 ? sx / sw : NAN;
        const double classical = params.center.x + params.v0.x * ensemble.times[k];
        report.mean.push_back(mean);
        report.classical.push_back(classical);
        const double dev = std::abs(mean - classical);
        if (!(dev <= report.max_deviation)) {
            report.max_deviation = std::isnan(dev) ? INFINITY : dev;
            report.worst_index = k;
        }
    }
    report.passed = report.max_deviation <= tolerance;
    return report;
}

double ks_distance(std::span<const double> sample, const DensityCdf& cdf) {
    if (sample.empty()) throw InvalidParameter("empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    const double n = double(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
    }
    return d;
}

}  // namespace bohm
