#include "bohm/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bohm/errors.hpp"
#include "fft.hpp"

namespace bohm {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_same_geometry(const GridGeometry& a, const GridGeometry& b) {
    if (!(a == b)) throw GeometryMismatch("state geometry differs from the stepper geometry");
}

}  // namespace

// ---------------------------------------------------------------------------
// Split-step Fourier

SpectralStepper::SpectralStepper(const GridGeometry& geometry, const Units& units, double dt)
    : geometry_(geometry), units_(units), dt_(dt) {
    geometry_.validate();
    for (int a = 0; a < geometry_.dimension; ++a)
        if (!is_power_of_two(geometry_.points[a]))
            throw InvalidParameter("spectral stepping needs power-of-two node counts");
    if (!(dt > 0.0)) throw InvalidParameter("time step must be positive");

    fft_ = std::make_unique<detail::Fft>(geometry_);
    const double inv_n = 1.0 / double(geometry_.size());
    const double factor = units_.hbar * dt_ / (2.0 * units_.mass);
    kinetic_.resize(geometry_.size());
    for (std::size_t i = 0; i < geometry_.size(); ++i) {
        double k2 = 0.0;
        if (geometry_.dimension == 1) {
            const double k = fft_->wavenumber(0, i);
            k2 = k * k;
        } else {
            const double kx = fft_->wavenumber(0, i / geometry_.points[1]);
            const double ky = fft_->wavenumber(1, i % geometry_.points[1]);
            k2 = kx * kx + ky * ky;
        }
        kinetic_[i] = std::polar(inv_n, -factor * k2);
    }
}

SpectralStepper::~SpectralStepper() = default;

SpectralStepper::SpectralStepper(const SpectralStepper& o)
    : geometry_(o.geometry_),
      units_(o.units_),
      dt_(o.dt_),
      fft_(std::make_unique<detail::Fft>(*o.fft_)),
      kinetic_(o.kinetic_) {}

SpectralStepper& SpectralStepper::operator=(const SpectralStepper& o) {
    if (this != &o) {
        geometry_ = o.geometry_;
        units_ = o.units_;
        dt_ = o.dt_;
        fft_ = std::make_unique<detail::Fft>(*o.fft_);
        kinetic_ = o.kinetic_;
    }
    return *this;
}

void SpectralStepper::check_state(const GridState& state) const {
    require_same_geometry(state.geometry, geometry_);
    if (!(state.units == units_)) throw InvalidParameter("state units differ from the stepper units");
}

std::vector<cplx> SpectralStepper::potential_phase(const PotentialSpec& potential,
                                                   const GridState& state) const {
    if (has_hard_wall(potential))
        throw InvalidParameter("hard-wall potentials cannot be propagated with periodic spectral steps");
    const PotentialNodes v = sample_potential(potential, geometry_, units_, state.t + 0.5 * dt_);
    double vmax = 0.0;
    for (double x : v.values) vmax = std::max(vmax, std::abs(x));
    if (!(dt_ * vmax / units_.hbar < 0.5)) {
        std::ostringstream msg;
        msg << "dt * max|V| / hbar = " << dt_ * vmax / units_.hbar << " is not below 0.5";
        throw StabilityViolation(msg.str());
    }
    std::vector<cplx> phase(v.values.size());
    const double half = 0.5 * dt_ / units_.hbar;
    for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = std::polar(1.0, -half * v.values[i]);
    return phase;
}

void SpectralStepper::kick_drift_kick(std::vector<cplx>& psi, const std::vector<cplx>& half_phase) const {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half_phase[i];
    fft_->forward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= kinetic_[i];
    fft_->backward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half_phase[i];
}

GridState SpectralStepper::step(const GridState& state, const PotentialSpec& potential) const {
    GridState next = state;
    advance(next, potential, 1);
    return next;
}

void SpectralStepper::advance(GridState& state, const PotentialSpec& potential, std::size_t steps) const {
    check_state(state);
    const bool varies = is_time_dependent(potential);
    std::vector<cplx> phase;
    for (std::size_t n = 0; n < steps; ++n) {
        if (n == 0 || varies) phase = potential_phase(potential, state);
        kick_drift_kick(state.psi, phase);
        state.t += dt_;
    }
    state.boundary = Boundary::periodic;
}

GridState step_spectral(const GridState& state, const PotentialSpec& potential, double dt) {
    return SpectralStepper(state.geometry, state.units, dt).step(state, potential);
}

// ---------------------------------------------------------------------------
// Crank-Nicolson, fourth-order Laplacian

namespace {

// Five-point second-derivative weights (times 1/dx^2).
constexpr double kD2[3] = {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};

// Solves a pentadiagonal system in place by band Gaussian elimination without
// pivoting.  band[i][k] holds A(i, i + k - 2).
void solve_pentadiagonal(std::vector<std::array<cplx, 5>>& band, std::vector<cplx>& rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx pivot = band[i][2];
        if (!(std::abs(pivot) > 1e-300) || !std::isfinite(pivot.real()) || !std::isfinite(pivot.imag()))
            throw SolverFailure("zero or non-finite pivot in the implicit step");
        for (std::size_t r = i + 1; r <= std::min(i + 2, n - 1); ++r) {
            const std::size_t off = 2 + i - r;  // column i in row r
            const cplx factor = band[r][off] / pivot;
            if (factor == cplx{}) continue;
            for (std::size_t c = i; c <= std::min(i + 2, n - 1); ++c)
                band[r][2 + c - r] -= factor * band[i][2 + c - i];
            rhs[r] -= factor * rhs[i];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        cplx acc = rhs[ii];
        for (std::size_t c = ii + 1; c <= std::min(ii + 2, n - 1); ++c) acc -= band[ii][2 + c - ii] * rhs[c];
        rhs[ii] = acc / band[ii][2];
        if (!std::isfinite(rhs[ii].real()) || !std::isfinite(rhs[ii].imag()))
            throw SolverFailure("implicit step produced a non-finite amplitude");
    }
}

}  // namespace

ImplicitStepper::ImplicitStepper(const GridGeometry& geometry, const Units& units, double dt)
    : geometry_(geometry), units_(units), dt_(dt) {
    geometry_.validate();
    if (geometry_.dimension != 1) throw InvalidParameter("implicit stepping is 1D only");
    if (!(dt > 0.0)) throw InvalidParameter("time step must be positive");
}

GridState ImplicitStepper::step(const GridState& state, const PotentialSpec& potential) const {
    require_same_geometry(state.geometry, geometry_);
    if (!(state.units == units_)) throw InvalidParameter("state units differ from the stepper units");

    const std::size_t n = geometry_.points[0];
    const PotentialNodes pot = sample_potential(potential, geometry_, units_, state.t + 0.5 * dt_);

    std::vector<std::uint8_t> pinned(n, 0);
    pinned.front() = 1;
    pinned.back() = 1;
    if (!pot.wall.empty())
        for (std::size_t i = 0; i < n; ++i) pinned[i] = pinned[i] || pot.wall[i];

    const double dx = geometry_.spacing(0);
    const double kin = -units_.hbar * units_.hbar / (2.0 * units_.mass * dx * dx);
    const cplx alpha = kI * (0.5 * dt_ / units_.hbar);

    GridState next = state;
    next.t = state.t + dt_;
    next.boundary = Boundary::dirichlet;
    std::fill(next.psi.begin(), next.psi.end(), cplx{});

    std::size_t i = 0;
    while (i < n) {
        if (pinned[i]) { ++i; continue; }
        std::size_t end = i;
        while (end < n && !pinned[end]) ++end;
        const std::size_t m = end - i;  // active segment [i, end)

        // H restricted to the segment: rows of the five-point stencil with
        // psi = 0 on the pinned neighbours and an odd reflection through them
        // for the second neighbour (diagonal correction on the end rows).
        std::vector<std::array<double, 5>> h(m);
        for (std::size_t r = 0; r < m; ++r) {
            h[r] = {kin * kD2[2], kin * kD2[1], kin * kD2[0] + pot.values[i + r], kin * kD2[1], kin * kD2[2]};
            if (r == 0) h[r][2] -= kin * kD2[2];
            if (r + 1 == m) h[r][2] -= kin * kD2[2];
        }

        std::vector<cplx> rhs(m);
        for (std::size_t r = 0; r < m; ++r) {
            cplx hpsi = 0.0;
            for (int k = -2; k <= 2; ++k) {
                const long c = long(r) + k;
                if (c < 0 || c >= long(m)) continue;
                hpsi += h[r][k + 2] * state.psi[i + std::size_t(c)];
            }
            rhs[r] = state.psi[i + r] - alpha * hpsi;
        }

        std::vector<std::array<cplx, 5>> band(m);
        for (std::size_t r = 0; r < m; ++r)
            for (int k = 0; k < 5; ++k) {
                const long c = long(r) + k - 2;
                const bool inside = c >= 0 && c < long(m);
                band[r][k] = inside ? alpha * h[r][k] + (k == 2 ? 1.0 : 0.0) : cplx{};
            }
        solve_pentadiagonal(band, rhs);
        std::copy(rhs.begin(), rhs.end(), next.psi.begin() + long(i));
        i = end;
    }
    return next;
}

void ImplicitStepper::advance(GridState& state, const PotentialSpec& potential, std::size_t steps) const {
    for (std::size_t n = 0; n < steps; ++n) state = step(state, potential);
}

GridState step_implicit(const GridState& state, const PotentialSpec& potential, double dt) {
    return ImplicitStepper(state.geometry, state.units, dt).step(state, potential);
}

// ---------------------------------------------------------------------------
// Absorbing layer

Absorber::Absorber(const GridGeometry& geometry, double width, double strength, double dt)
    : geometry_(geometry), mask_(geometry.size(), 1.0) {
    geometry_.validate();
    if (!(width > 0.0) || !(strength >= 0.0) || !(dt > 0.0))
        throw InvalidParameter("absorber needs positive width and dt and non-negative strength");
    for (int a = 0; a < geometry_.dimension; ++a)
        if (!(width < 0.25 * (geometry_.upper[a] - geometry_.lower[a])))
            throw InvalidParameter("absorbing layer must be thinner than 25% of the domain");

    for (std::size_t i = 0; i < mask_.size(); ++i) {
        const Vec2 r = geometry_.node(i);
        double exponent = 0.0;
        for (int a = 0; a < geometry_.dimension; ++a) {
            const double d = std::max({0.0, geometry_.lower[a] + width - r[a], r[a] - (geometry_.upper[a] - width)});
            const double s = d / width;
            exponent += s * s;
        }
        mask_[i] = std::exp(-strength * dt * exponent);
    }
}

GridState Absorber::apply(const GridState& state) {
    GridState out = state;
    apply_in_place(out);
    return out;
}

void Absorber::apply_in_place(GridState& state) {
    require_same_geometry(state.geometry, geometry_);
    double removed = 0.0;
    for (std::size_t i = 0; i < state.psi.size(); ++i) {
        const double before = std::norm(state.psi[i]);
        state.psi[i] *= mask_[i];
        removed += before - std::norm(state.psi[i]);
    }
    absorbed_ += removed * geometry_.cell_volume();
}

}  // namespace bohm
