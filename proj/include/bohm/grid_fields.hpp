#pragma once

#include <span>
#include <vector>

#include "bohm/analytic_wave.hpp"
#include "bohm/grid.hpp"

namespace bohm {

/// d f / d x_axis on the grid: spectral for periodic grids, fourth-order
/// central differences (odd reflection through the edge nodes) for Dirichlet.
std::vector<cplx> grid_derivative(const GridGeometry& geometry, std::span<const cplx> f, int axis,
                                  Boundary boundary);
std::vector<cplx> grid_second_derivative(const GridGeometry& geometry, std::span<const cplx> f,
                                         int axis, Boundary boundary);

/// Divergence of a real vector field given per node.
std::vector<double> grid_divergence(const GridGeometry& geometry, std::span<const Vec2> field,
                                    Boundary boundary);

/// rho, J, v, grad S and Q at every node of `state`, using the same density
/// floor rule as the analytic fields.
std::vector<FieldSample> synthesize_fields(const GridState& state,
                                           double density_floor = kDefaultDensityFloor);

/// Probability current only (cheaper than the full field set).
std::vector<Vec2> grid_current(const GridState& state);

}  // namespace bohm
