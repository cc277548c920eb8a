#pragma once

// Time steppers for i hbar dpsi/dt = (-hbar^2/2m lap + V) psi on a GridState.
//
// SpectralStepper: Strang split-step Fourier (half potential, exact kinetic
// step in wavenumber space, half potential).  Periodic boundaries; rejects
// hard-wall potentials.
//
// ImplicitStepper: Crank-Nicolson with a five-point fourth-order Laplacian,
// Dirichlet psi = 0 at the domain edges and at wall-flagged nodes.  1D only.
// The Hamiltonian matrix is real symmetric, so every step is unitary to
// round-off.  Time-dependent potentials are sampled at the step midpoint.

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/potential.hpp"

namespace bohm {

namespace detail { class Fft; }

class SpectralStepper {
public:
    /// Requires power-of-two node counts on every axis.
    SpectralStepper(const GridGeometry& geometry, const Units& units, double dt);
    ~SpectralStepper();
    SpectralStepper(const SpectralStepper&);
    SpectralStepper& operator=(const SpectralStepper&);

    double dt() const { return dt_; }

    /// One step; throws StabilityViolation if dt * max|V| / hbar >= 0.5.
    GridState step(const GridState& state, const PotentialSpec& potential) const;
    /// `steps` steps in place.
    void advance(GridState& state, const PotentialSpec& potential, std::size_t steps) const;

private:
    void check_state(const GridState& state) const;
    std::vector<cplx> potential_phase(const PotentialSpec& potential, const GridState& state) const;
    void kick_drift_kick(std::vector<cplx>& psi, const std::vector<cplx>& half_phase) const;

    GridGeometry geometry_;
    Units units_;
    double dt_;
    std::unique_ptr<detail::Fft> fft_;
    std::vector<cplx> kinetic_;  // exp(-i hbar k^2 dt / 2m) / N
};

GridState step_spectral(const GridState& state, const PotentialSpec& potential, double dt);

class ImplicitStepper {
public:
    ImplicitStepper(const GridGeometry& geometry, const Units& units, double dt);

    double dt() const { return dt_; }

    /// One step; throws SolverFailure if the banded solve breaks down.
    GridState step(const GridState& state, const PotentialSpec& potential) const;
    void advance(GridState& state, const PotentialSpec& potential, std::size_t steps) const;

private:
    GridGeometry geometry_;
    Units units_;
    double dt_;
};

GridState step_implicit(const GridState& state, const PotentialSpec& potential, double dt);

/// Complex absorbing layer: psi is multiplied every step by
/// exp(-strength * dt * (d / width)^2), d being the penetration depth into a
/// layer of thickness `width` along each grid edge.
class Absorber {
public:
    /// Throws InvalidParameter unless width < 25% of the extent on every axis.
    Absorber(const GridGeometry& geometry, double width, double strength, double dt);

    /// Masked copy of `state`; the probability removed is added to absorbed().
    GridState apply(const GridState& state);
    void apply_in_place(GridState& state);

    double absorbed() const { return absorbed_; }
    const std::vector<double>& mask() const { return mask_; }

private:
    GridGeometry geometry_;
    std::vector<double> mask_;
    double absorbed_ = 0.0;
};

}  // namespace bohm
