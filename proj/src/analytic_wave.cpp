#include "bohm/analytic_wave.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

constexpr cplx kI{0.0, 1.0};

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// One separable factor of a component together with its logarithmic
// derivatives d(log f)/dx and f''/f.
struct AxisFactor {
    cplx value;
    cplx dlog;
    cplx d2_ratio;
};

AxisFactor axis_factor(const GaussianParams& p, int axis, double coord, double t) {
    const double s0 = p.sigma0[axis];
    const double tau = p.tau(axis);
    const cplx s{1.0, t / tau};
    const double xi = coord - p.center[axis] - p.v0[axis] * t;
    const double k0 = p.mass * p.v0[axis] / p.hbar;
    const double energy_phase = 0.5 * p.mass * p.v0[axis] * p.v0[axis] * t / p.hbar;

    const cplx exponent = -xi * xi / (4.0 * s0 * s0 * s) + kI * (k0 * xi + energy_phase);
    const double prefactor = std::pow(2.0 * std::numbers::pi * s0 * s0, -0.25);

    AxisFactor f;
    f.value = prefactor * std::pow(s, -0.5) * std::exp(exponent);
    f.dlog = -xi / (2.0 * s0 * s0 * s) + kI * k0;
    f.d2_ratio = f.dlog * f.dlog - 1.0 / (2.0 * s0 * s0 * s);
    return f;
}

struct ComponentValue {
    cplx psi;     // weighted value
    cplx dlog_x;  // grad(psi)/psi
    cplx dlog_y;
    cplx lap_ratio;  // laplacian(psi)/psi
};

ComponentValue component_value(const GaussianParams& p, int dimension, Vec2 r, double t) {
    const AxisFactor fx = axis_factor(p, 0, r.x, t);
    ComponentValue c;
    if (dimension == 1) {
        c.psi = p.weight * fx.value;
        c.dlog_x = fx.dlog;
        c.dlog_y = 0.0;
        c.lap_ratio = fx.d2_ratio;
        return c;
    }
    const AxisFactor fy = axis_factor(p, 1, r.y, t);
    c.psi = p.weight * fx.value * fy.value;
    c.dlog_x = fx.dlog;
    c.dlog_y = fy.dlog;
    c.lap_ratio = fx.d2_ratio + fy.d2_ratio;
    return c;
}

}  // namespace

GaussianParams GaussianParams::line(double sigma0, double center, double v0, double mass,
                                    double hbar) {
    GaussianParams p;
    p.mass = mass;
    p.hbar = hbar;
    p.sigma0 = {sigma0, sigma0};
    p.center = {center, 0.0};
    p.v0 = {v0, 0.0};
    return p;
}

double GaussianParams::tau(int axis) const {
    return 2.0 * mass * sigma0[axis] * sigma0[axis] / hbar;
}

double GaussianParams::spreading_velocity(int axis) const {
    return hbar / (2.0 * mass * sigma0[axis]);
}

void GaussianParams::validate(int dimension) const {
    if (!positive_finite(mass)) throw InvalidParameter("mass must be positive and finite");
    if (!positive_finite(hbar)) throw InvalidParameter("hbar must be positive and finite");
    for (int a = 0; a < dimension; ++a) {
        if (!positive_finite(sigma0[a]))
            throw InvalidParameter("sigma0 must be positive and finite on every axis");
        if (!std::isfinite(center[a]) || !std::isfinite(v0[a]))
            throw InvalidParameter("packet center and velocity must be finite");
        if (!std::isfinite(tau(a))) throw InvalidParameter("spreading time is not finite");
    }
    if (!std::isfinite(weight.real()) || !std::isfinite(weight.imag()))
        throw InvalidParameter("packet weight must be finite");
}

SuperpositionSpec SuperpositionSpec::single(const GaussianParams& p, int dimension) {
    SuperpositionSpec s;
    s.dimension = dimension;
    s.components = {p};
    return s;
}

SuperpositionSpec SuperpositionSpec::counter_propagating(double sigma0, double half_separation,
                                                         double v0, double mass, double hbar) {
    SuperpositionSpec s;
    s.dimension = 1;
    s.components = {GaussianParams::line(sigma0, -half_separation, std::abs(v0), mass, hbar),
                    GaussianParams::line(sigma0, half_separation, -std::abs(v0), mass, hbar)};
    return s;
}

double SuperpositionSpec::relative_weight_alpha() const {
    if (components.size() != 2)
        throw InvalidParameter("relative weight is defined for two-component superpositions");
    return std::norm(components[1].weight) / std::norm(components[0].weight);
}

void SuperpositionSpec::validate() const {
    if (dimension != 1 && dimension != 2) throw InvalidParameter("dimension must be 1 or 2");
    if (components.empty()) throw InvalidParameter("superposition has no components");
    bool any_weight = false;
    for (const auto& c : components) {
        c.validate(dimension);
        if (c.mass != components.front().mass || c.hbar != components.front().hbar)
            throw InvalidParameter("all components must share mass and hbar");
        any_weight = any_weight || std::abs(c.weight) > 0.0;
    }
    if (!any_weight) throw InvalidParameter("at least one component needs a nonzero weight");
}

double sigma_t(const GaussianParams& params, double t, int axis) {
    const double r = t / params.tau(axis);
    return params.sigma0[axis] * std::sqrt(1.0 + r * r);
}

cplx evaluate_psi(const SuperpositionSpec& spec, Vec2 r, double t) {
    cplx total = 0.0;
    for (const auto& c : spec.components) total += component_value(c, spec.dimension, r, t).psi;
    return total;
}

WaveDerivatives evaluate_derivatives(const SuperpositionSpec& spec, Vec2 r, double t) {
    WaveDerivatives d{};
    for (const auto& c : spec.components) {
        const ComponentValue v = component_value(c, spec.dimension, r, t);
        d.psi += v.psi;
        d.grad_x += v.psi * v.dlog_x;
        d.grad_y += v.psi * v.dlog_y;
        d.laplacian += v.psi * v.lap_ratio;
    }
    return d;
}

FieldSample field_sample(const SuperpositionSpec& spec, Vec2 r, double t, double density_floor) {
    const WaveDerivatives d = evaluate_derivatives(spec, r, t);
    const double hbar = spec.hbar();
    const double mass = spec.mass();

    FieldSample s;
    s.rho = std::norm(d.psi);
    const cplx conj_psi = std::conj(d.psi);
    s.J = Vec2{(hbar / mass) * (conj_psi * d.grad_x).imag(),
               (hbar / mass) * (conj_psi * d.grad_y).imag()};
    if (!(s.rho > density_floor)) return s;

    const Vec2 v = s.J / s.rho;
    s.v = v;
    s.grad_S = mass * v;

    // Q = hbar^2/(4m) [ |grad rho|^2 / (2 rho^2) - lap rho / rho ], with the
    // density derivatives expressed through grad(psi)/psi and lap(psi)/psi.
    const cplx gx = d.grad_x / d.psi;
    const cplx gy = d.grad_y / d.psi;
    const cplx lap = d.laplacian / d.psi;
    const double drho_x = 2.0 * gx.real();
    const double drho_y = 2.0 * gy.real();
    const double lap_rho = 2.0 * lap.real() + 2.0 * (std::norm(gx) + std::norm(gy));
    s.Q = hbar * hbar / (4.0 * mass) *
          (0.5 * (drho_x * drho_x + drho_y * drho_y) - lap_rho);
    return s;
}

double closed_form_trajectory(const GaussianParams& params, double x_start, double t) {
    const double offset = x_start - params.center.x;
    return params.center.x + params.v0.x * t + sigma_t(params, t, 0) / params.sigma0.x * offset;
}

Vec2 closed_form_trajectory(const GaussianParams& params, Vec2 r_start, double t, int dimension) {
    Vec2 out = r_start;
    for (int a = 0; a < dimension; ++a) {
        const double offset = r_start[a] - params.center[a];
        out[a] = params.center[a] + params.v0[a] * t + sigma_t(params, t, a) / params.sigma0[a] * offset;
    }
    return out;
}

double asymptotic_trajectory(const GaussianParams& params, double x_start, double t,
                             AsymptoticRegime regime) {
    const double offset = x_start - params.center.x;
    const double tau = params.tau(0);
    switch (regime) {
        case AsymptoticRegime::fresnel:
            return params.center.x + offset + params.v0.x * t + 0.5 * (offset / (tau * tau)) * t * t;
        case AsymptoticRegime::fraunhofer:
            return params.center.x + (params.v0.x + offset / tau) * t;
    }
    return 0.0;
}

ComponentPolar component_polar(const GaussianParams& p, int dimension, Vec2 r, double t) {
    const ComponentValue v = component_value(p, dimension, r, t);
    ComponentPolar c;
    c.rho = std::norm(v.psi);
    c.S = p.hbar * std::arg(v.psi);
    c.grad_S = Vec2{p.hbar * v.dlog_x.imag(), p.hbar * v.dlog_y.imag()};
    const double amp = std::sqrt(c.rho);
    c.grad_sqrt_rho = Vec2{amp * v.dlog_x.real(), amp * v.dlog_y.real()};
    return c;
}

std::optional<Vec2> AssembledFields::velocity(double density_floor) const {
    if (!(rho > density_floor)) return std::nullopt;
    return J / rho;
}

AssembledFields assemble_two_component(const SuperpositionSpec& spec, Vec2 r, double t) {
    if (spec.components.size() != 2)
        throw InvalidParameter("interference assembly needs exactly two components");
    const double hbar = spec.hbar();
    const double mass = spec.mass();
    const ComponentPolar a = component_polar(spec.components[0], spec.dimension, r, t);
    const ComponentPolar b = component_polar(spec.components[1], spec.dimension, r, t);

    AssembledFields f;
    f.phase_difference = (b.S - a.S) / hbar;
    const double c = std::cos(f.phase_difference);
    const double s = std::sin(f.phase_difference);
    const double cross = std::sqrt(a.rho * b.rho);
    const double amp_a = std::sqrt(a.rho);
    const double amp_b = std::sqrt(b.rho);

    f.rho = a.rho + b.rho + 2.0 * cross * c;
    f.rho_scale = a.rho + b.rho + 2.0 * cross;

    const Vec2 t1 = a.rho * a.grad_S;
    const Vec2 t2 = b.rho * b.grad_S;
    const Vec2 t3 = cross * (a.grad_S + b.grad_S);
    const Vec2 t4 = hbar * (amp_a * b.grad_sqrt_rho - amp_b * a.grad_sqrt_rho);
    f.J = (t1 + t2 + c * t3 + s * t4) / mass;
    f.J_scale = (t1.norm() + t2.norm() + t3.norm() + t4.norm()) / mass;
    return f;
}

}  // namespace bohm
