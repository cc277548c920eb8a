#include "bohm/grid_fields.hpp"

#include "bohm/errors.hpp"
#include "fft.hpp"

namespace bohm {

namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<cplx> spectral_derivative(const GridGeometry& g, std::span<const cplx> f, int axis, int order) {
    const detail::Fft fft(g);
    std::vector<cplx> work(f.begin(), f.end());
    fft.forward(work);
    const std::size_t n_axis = g.points[axis];
    const double inv_n = 1.0 / double(g.size());
    for (std::size_t i = 0; i < work.size(); ++i) {
        const std::size_t bin = g.dimension == 1 ? i : (axis == 0 ? i / g.points[1] : i % g.points[1]);
        const double k = fft.wavenumber(axis, bin);
        if (order == 1) {
            work[i] *= (2 * bin == n_axis) ? cplx{} : kI * k * inv_n;
        } else {
            work[i] *= -k * k * inv_n;
        }
    }
    fft.backward(work);
    return work;
}

// Fourth-order stencils along one axis with odd reflection through the first
// and last node (psi vanishes there for Dirichlet states).
std::vector<cplx> fd_derivative(const GridGeometry& g, std::span<const cplx> f, int axis, int order) {
    const std::size_t n = g.points[axis];
    const std::size_t stride = (g.dimension == 2 && axis == 0) ? g.points[1] : 1;
    const std::size_t lines = g.size() / n;
    const double h = g.spacing(axis);
    std::vector<cplx> out(f.size());

    for (std::size_t line = 0; line < lines; ++line) {
        const std::size_t base = (g.dimension == 2 && axis == 1) ? line * n : line;
        auto at = [&](long j) -> cplx {
            if (j < 0) return -f[base + std::size_t(-j) * stride];
            if (j >= long(n)) return -f[base + std::size_t(2 * (long(n) - 1) - j) * stride];
            return f[base + std::size_t(j) * stride];
        };
        for (long j = 0; j < long(n); ++j) {
            cplx d;
            if (order == 1) {
                d = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h);
            } else {
                d = (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) - at(j + 2)) / (12.0 * h * h);
            }
            out[base + std::size_t(j) * stride] = d;
        }
    }
    return out;
}

void check_axis(const GridGeometry& g, std::span<const cplx> f, int axis) {
    if (axis < 0 || axis >= g.dimension) throw InvalidParameter("derivative axis out of range");
    if (f.size() != g.size()) throw GeometryMismatch("field size does not match the grid");
}

}  // namespace

std::vector<cplx> grid_derivative(const GridGeometry& geometry, std::span<const cplx> f, int axis,
                                  Boundary boundary) {
    check_axis(geometry, f, axis);
    return boundary == Boundary::periodic ? spectral_derivative(geometry, f, axis, 1)
                                          : fd_derivative(geometry, f, axis, 1);
}

std::vector<cplx> grid_second_derivative(const GridGeometry& geometry, std::span<const cplx> f,
                                         int axis, Boundary boundary) {
    check_axis(geometry, f, axis);
    return boundary == Boundary::periodic ? spectral_derivative(geometry, f, axis, 2)
                                          : fd_derivative(geometry, f, axis, 2);
}

std::vector<double> grid_divergence(const GridGeometry& geometry, std::span<const Vec2> field,
                                    Boundary boundary) {
    std::vector<double> div(field.size(), 0.0);
    for (int a = 0; a < geometry.dimension; ++a) {
        std::vector<cplx> comp(field.size());
        for (std::size_t i = 0; i < field.size(); ++i) comp[i] = field[i][a];
        const std::vector<cplx> d = grid_derivative(geometry, comp, a, boundary);
        for (std::size_t i = 0; i < field.size(); ++i) div[i] += d[i].real();
    }
    return div;
}

std::vector<Vec2> grid_current(const GridState& state) {
    const GridGeometry& g = state.geometry;
    const double c = state.units.hbar / state.units.mass;
    std::vector<Vec2> J(state.psi.size());
    for (int a = 0; a < g.dimension; ++a) {
        const std::vector<cplx> d = grid_derivative(g, state.psi, a, state.boundary);
        for (std::size_t i = 0; i < J.size(); ++i) J[i][a] = c * (std::conj(state.psi[i]) * d[i]).imag();
    }
    return J;
}

std::vector<FieldSample> synthesize_fields(const GridState& state, double density_floor) {
    const GridGeometry& g = state.geometry;
    const double hbar = state.units.hbar;
    const double mass = state.units.mass;

    std::vector<std::vector<cplx>> grad(g.dimension);
    std::vector<cplx> lap(state.psi.size(), cplx{});
    for (int a = 0; a < g.dimension; ++a) {
        grad[a] = grid_derivative(g, state.psi, a, state.boundary);
        const std::vector<cplx> d2 = grid_second_derivative(g, state.psi, a, state.boundary);
        for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += d2[i];
    }

    std::vector<FieldSample> out(state.psi.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const cplx psi = state.psi[i];
        FieldSample& s = out[i];
        s.rho = std::norm(psi);
        Vec2 J{};
        for (int a = 0; a < g.dimension; ++a) J[a] = (hbar / mass) * (std::conj(psi) * grad[a][i]).imag();
        s.J = J;
        if (!(s.rho > density_floor)) continue;
        const Vec2 v = J / s.rho;
        s.v = v;
        s.grad_S = mass * v;

        double grad_term = 0.0;
        double lap_rho = 2.0 * (lap[i] / psi).real();
        for (int a = 0; a < g.dimension; ++a) {
            const cplx ga = grad[a][i] / psi;
            grad_term += 4.0 * ga.real() * ga.real();
            lap_rho += 2.0 * std::norm(ga);
        }
        s.Q = hbar * hbar / (4.0 * mass) * (0.5 * grad_term - lap_rho);
    }
    return out;
}

}  // namespace bohm
