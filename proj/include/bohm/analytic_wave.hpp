#pragma once

// Closed-form free Gaussian wave packets, their coherent superpositions and
// the hydrodynamic fields (density, phase gradient, current, velocity and
// quantum potential) derived from them.
//
// A single 1D component reads
//
//   psi(x,t) = (2 pi s_t^2)^(-1/4) exp(-xi^2 / (4 s_t sigma0) + i p0 xi / hbar + i E t / hbar)
//
// with xi = x - x_c - v0 t, complex width s_t = sigma0 (1 + i t / tau),
// tau = 2 m sigma0^2 / hbar and E = p0^2 / 2m.  2D components are separable
// products of two such factors.

#include <optional>
#include <vector>

#include "bohm/vec.hpp"

namespace bohm {

inline constexpr double kDefaultDensityFloor = 1e-300;

/// Physical parameters of one Gaussian packet.  Per-axis quantities use
/// index 0 for x and 1 for y; 1D packets ignore the y entries.
struct GaussianParams {
    double mass = 1.0;
    double hbar = 1.0;
    Vec2 sigma0{1.0, 1.0};
    Vec2 center{};
    Vec2 v0{};
    cplx weight{1.0, 0.0};

    static GaussianParams line(double sigma0, double center, double v0,
                               double mass = 1.0, double hbar = 1.0);

    /// Spreading time 2 m sigma0^2 / hbar along `axis`.
    double tau(int axis = 0) const;
    /// Spreading-rate velocity hbar / (2 m sigma0) along `axis`.
    double spreading_velocity(int axis = 0) const;
    double momentum(int axis = 0) const { return mass * v0[axis]; }

    /// Throws InvalidParameter unless sigma0, mass, hbar are positive and finite.
    void validate(int dimension = 1) const;
};

/// Ordered list of packets forming Psi = sum_i weight_i psi_i.
struct SuperpositionSpec {
    int dimension = 1;
    std::vector<GaussianParams> components;

    static SuperpositionSpec single(const GaussianParams& p, int dimension = 1);
    /// Two packets at -/+ half_separation moving towards each other with speed |v0|.
    static SuperpositionSpec counter_propagating(double sigma0, double half_separation, double v0,
                                                 double mass = 1.0, double hbar = 1.0);

    double mass() const { return components.front().mass; }
    double hbar() const { return components.front().hbar; }

    /// |w_2 / w_1|^2 for a two-component spec.
    double relative_weight_alpha() const;

    /// Throws InvalidParameter on empty lists, mixed units, or all-zero weights.
    void validate() const;
};

double sigma_t(const GaussianParams& params, double t, int axis = 0);

cplx evaluate_psi(const SuperpositionSpec& spec, Vec2 r, double t);
inline cplx evaluate_psi(const SuperpositionSpec& spec, double x, double t) {
    return evaluate_psi(spec, Vec2{x, 0.0}, t);
}

/// Psi together with its exact gradient and Laplacian.
struct WaveDerivatives {
    cplx psi;
    cplx grad_x;
    cplx grad_y;
    cplx laplacian;
};

WaveDerivatives evaluate_derivatives(const SuperpositionSpec& spec, Vec2 r, double t);

/// Hydrodynamic fields at one spacetime point.  `grad_S`, `v` and `Q` are
/// empty where rho does not exceed the density floor.
struct FieldSample {
    double rho = 0.0;
    Vec2 J{};
    std::optional<Vec2> grad_S;
    std::optional<Vec2> v;
    std::optional<double> Q;

    bool defined() const { return v.has_value(); }
};

FieldSample field_sample(const SuperpositionSpec& spec, Vec2 r, double t,
                         double density_floor = kDefaultDensityFloor);
inline FieldSample field_sample(const SuperpositionSpec& spec, double x, double t,
                                double density_floor = kDefaultDensityFloor) {
    return field_sample(spec, Vec2{x, 0.0}, t, density_floor);
}

/// Bohmian path of a free packet started at `x_start`:
/// x(t) = x_c + v0 t + (sigma_t / sigma0) (x_start - x_c).
double closed_form_trajectory(const GaussianParams& params, double x_start, double t);
Vec2 closed_form_trajectory(const GaussianParams& params, Vec2 r_start, double t, int dimension);

enum class AsymptoticRegime { fresnel, fraunhofer };

/// Short-time (quadratic) or long-time (uniform) limit of the closed-form path.
double asymptotic_trajectory(const GaussianParams& params, double x_start, double t,
                             AsymptoticRegime regime);

/// Polar decomposition of one weighted component: rho_i, S_i and their gradients.
struct ComponentPolar {
    double rho = 0.0;
    double S = 0.0;
    Vec2 grad_S{};
    Vec2 grad_sqrt_rho{};
};

ComponentPolar component_polar(const GaussianParams& p, int dimension, Vec2 r, double t);

/// Density and current of a two-packet superposition assembled from the
/// component moduli and phases through the interference formulas
///   rho = rho1 + rho2 + 2 sqrt(rho1 rho2) cos(phi)
///   J   = [rho1 gS1 + rho2 gS2 + sqrt(rho1 rho2) (gS1 + gS2) cos(phi)
///          + hbar (R1 gR2 - R2 gR1) sin(phi)] / m
/// with phi = (S2 - S1) / hbar.  The `*_scale` members hold the sum of the
/// absolute values of the terms, used as the reference for relative errors.
struct AssembledFields {
    double rho = 0.0;
    Vec2 J{};
    double phase_difference = 0.0;
    double rho_scale = 0.0;
    double J_scale = 0.0;

    std::optional<Vec2> velocity(double density_floor = kDefaultDensityFloor) const;
};

AssembledFields assemble_two_component(const SuperpositionSpec& spec, Vec2 r, double t);

}  // namespace bohm
