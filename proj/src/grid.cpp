#include "bohm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bohm/errors.hpp"

namespace bohm {

GridGeometry GridGeometry::line(double lower, double upper, std::size_t points) {
    GridGeometry g;
    g.dimension = 1;
    g.lower = {lower, 0.0};
    g.upper = {upper, 1.0};
    g.points = {points, 1};
    return g;
}

GridGeometry GridGeometry::plane(double x_lower, double x_upper, std::size_t nx, double y_lower,
                                 double y_upper, std::size_t ny) {
    GridGeometry g;
    g.dimension = 2;
    g.lower = {x_lower, y_lower};
    g.upper = {x_upper, y_upper};
    g.points = {nx, ny};
    return g;
}

Vec2 GridGeometry::node(std::size_t flat) const {
    if (dimension == 1) return Vec2{coordinate(0, flat), 0.0};
    return Vec2{coordinate(0, flat / points[1]), coordinate(1, flat % points[1])};
}

std::size_t GridGeometry::nearest(int axis, double x) const {
    const double f = std::round((x - lower[axis]) / spacing(axis));
    if (f <= 0.0) return 0;
    return std::min(points[axis] - 1, static_cast<std::size_t>(f));
}

void GridGeometry::validate() const {
    if (dimension != 1 && dimension != 2) throw InvalidParameter("grid dimension must be 1 or 2");
    for (int a = 0; a < dimension; ++a) {
        if (points[a] < 16) throw InvalidParameter("grid needs at least 16 points per axis");
        if (!(upper[a] > lower[a]) || !std::isfinite(upper[a] - lower[a]))
            throw InvalidParameter("grid extent must be positive and finite");
    }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double GridState::norm() const {
    double sum = 0.0;
    for (const cplx& z : psi) sum += std::norm(z);
    return sum * geometry.cell_volume();
}

std::vector<double> GridState::density() const {
    std::vector<double> rho(psi.size());
    std::transform(psi.begin(), psi.end(), rho.begin(), [](cplx z) { return std::norm(z); });
    return rho;
}

std::vector<cplx> sample_on_grid(const SuperpositionSpec& spec, const GridGeometry& geometry,
                                 double t) {
    std::vector<cplx> psi(geometry.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = evaluate_psi(spec, geometry.node(i), t);
    return psi;
}

GridState initialize_grid(const SuperpositionSpec& spec, const GridGeometry& geometry,
                          const InitializeOptions& options) {
    spec.validate();
    geometry.validate();
    if (spec.dimension != geometry.dimension)
        throw InvalidParameter("spec and grid dimensions differ");

    for (const auto& c : spec.components) {
        for (int a = 0; a < geometry.dimension; ++a) {
            const double reach = options.margin_sigmas * c.sigma0[a];
            if (c.center[a] - reach < geometry.lower[a] || c.center[a] + reach > geometry.upper[a]) {
                std::ostringstream msg;
                msg << "packet centered at " << c.center[a] << " on axis " << a
                    << " is closer than " << options.margin_sigmas << " sigma0 to the grid edge";
                throw GridTooSmall(msg.str());
            }
        }
    }

    GridState state;
    state.geometry = geometry;
    state.units = Units{spec.mass(), spec.hbar()};
    state.boundary = options.boundary;
    state.psi = sample_on_grid(spec, geometry, 0.0);

    // Boundary density check: first/last node along every axis.
    double peak = 0.0;
    for (const cplx& z : state.psi) peak = std::max(peak, std::norm(z));
    double edge = 0.0;
    for (std::size_t i = 0; i < state.psi.size(); ++i) {
        const std::size_t ix = geometry.dimension == 1 ? i : i / geometry.points[1];
        const std::size_t iy = geometry.dimension == 1 ? 0 : i % geometry.points[1];
        const bool on_edge = ix == 0 || ix + 1 == geometry.points[0] ||
                             (geometry.dimension == 2 && (iy == 0 || iy + 1 == geometry.points[1]));
        if (on_edge) edge = std::max(edge, std::norm(state.psi[i]));
    }
    if (!(peak > 0.0)) throw GridTooSmall("initial density vanishes on every node");
    if (edge >= options.boundary_density_ratio * peak)
        throw GridTooSmall("initial density at the grid boundary exceeds the allowed fraction of the peak");

    const double scale = 1.0 / std::sqrt(state.norm());
    for (cplx& z : state.psi) z *= scale;
    return state;
}

Moments axis_moments(const GridGeometry& geometry, const std::vector<double>& rho, int axis) {
    Moments m;
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double x = geometry.node(i)[axis];
        s0 += rho[i];
        s1 += rho[i] * x;
    }
    m.norm = s0 * geometry.cell_volume();
    m.mean = s1 / s0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double d = geometry.node(i)[axis] - m.mean;
        s2 += rho[i] * d * d;
    }
    m.variance = s2 / s0;
    return m;
}

}  // namespace bohm
