#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "bohm/analytic_wave.hpp"

namespace bohm {

/// Uniform 1D/2D grid.  Node i on axis a sits at lower[a] + i * spacing(a)
/// with spacing(a) = (upper[a] - lower[a]) / points[a]; the upper extent is
/// the periodic image of the first node and is not itself a node.
struct GridGeometry {
    int dimension = 1;
    std::array<double, 2> lower{0.0, 0.0};
    std::array<double, 2> upper{1.0, 1.0};
    std::array<std::size_t, 2> points{16, 1};

    static GridGeometry line(double lower, double upper, std::size_t points);
    static GridGeometry plane(double x_lower, double x_upper, std::size_t nx,
                              double y_lower, double y_upper, std::size_t ny);

    double spacing(int axis = 0) const { return (upper[axis] - lower[axis]) / double(points[axis]); }
    double coordinate(int axis, std::size_t i) const { return lower[axis] + double(i) * spacing(axis); }
    std::size_t size() const { return dimension == 1 ? points[0] : points[0] * points[1]; }
    double cell_volume() const { return dimension == 1 ? spacing(0) : spacing(0) * spacing(1); }

    /// Row-major flat index, x slowest: index = ix * ny + iy.
    std::size_t index(std::size_t ix, std::size_t iy = 0) const {
        return dimension == 1 ? ix : ix * points[1] + iy;
    }
    Vec2 node(std::size_t flat) const;

    /// Index of the node closest to `x` along `axis` (clamped to the grid).
    std::size_t nearest(int axis, double x) const;

    /// Throws InvalidParameter unless every axis has >= 16 nodes and a positive extent.
    void validate() const;

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

bool is_power_of_two(std::size_t n);

enum class Boundary { periodic, dirichlet };

struct Units {
    double mass = 1.0;
    double hbar = 1.0;
    friend bool operator==(const Units&, const Units&) = default;
};

/// Complex wavefunction sampled on a grid at time `t`.  `boundary` records
/// which stepper produced it and selects the derivative scheme used when
/// fields are synthesized from it.
struct GridState {
    GridGeometry geometry;
    std::vector<cplx> psi;
    double t = 0.0;
    Units units;
    Boundary boundary = Boundary::periodic;

    double norm() const;
    std::vector<double> density() const;
};

/// Analytic Psi(x, t) sampled at every node, without renormalization.
std::vector<cplx> sample_on_grid(const SuperpositionSpec& spec, const GridGeometry& geometry,
                                 double t = 0.0);

struct InitializeOptions {
    double margin_sigmas = 8.0;        // required clearance between packet centers and edges
    double boundary_density_ratio = 1e-12;
    Boundary boundary = Boundary::periodic;
};

/// Samples Psi(x, 0) on the nodes and renormalizes to unit grid norm.
/// Throws GridTooSmall when the packets are not comfortably inside the grid.
GridState initialize_grid(const SuperpositionSpec& spec, const GridGeometry& geometry,
                          const InitializeOptions& options = {});

/// Mean and variance of a density along one axis (grid quadrature).
struct Moments {
    double norm = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

Moments axis_moments(const GridGeometry& geometry, const std::vector<double>& rho, int axis = 0);

// Snapshot files: fixed little/big-endian-tagged binary layout, see
// docs/snapshot_format.md.
void write_snapshot(const std::filesystem::path& path, const GridState& state);
GridState read_snapshot(const std::filesystem::path& path);

}  // namespace bohm
