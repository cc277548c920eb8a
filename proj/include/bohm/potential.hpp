#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "bohm/effective_well.hpp"
#include "bohm/grid.hpp"

namespace bohm {

struct FreePotential {};

/// Hard-wall square well of the effective-well model (1D, Dirichlet only).
struct EffectiveWellPotential {
    EffectiveWellParams params;
    bool include_well = true;
};

/// Stand-in reaction surface: a Gaussian barrier across a curved harmonic valley,
///   V(x, y) = Vb exp(-x^2 / w^2) + 1/2 m omega^2 (y - f(x))^2,  f(x) = a tanh(x / l),
/// clipped at `cap` so the split-step phase stays resolved at the grid edges.
struct ModelPes2D {
    double barrier_height = 1.0;
    double barrier_width = 1.0;
    double omega = 1.0;
    double valley_shift = 2.0;   // a
    double valley_length = 4.0;  // l
    double cap = 20.0;

    double valley_floor(double x) const;
    double evaluate(double x, double y, double mass) const;
};

/// Static potential given directly on the nodes of `geometry`.
struct TabulatedPotential {
    GridGeometry geometry;
    std::vector<double> values;
};

using PotentialSpec = std::variant<FreePotential, EffectiveWellPotential, ModelPes2D, TabulatedPotential>;

struct PotentialNodes {
    std::vector<double> values;
    std::vector<std::uint8_t> wall;  // empty when no node is pinned
};

bool is_time_dependent(const PotentialSpec& potential);
bool has_hard_wall(const PotentialSpec& potential);

/// Node values at time t.  Throws InvalidParameter on dimension or geometry mismatch.
PotentialNodes sample_potential(const PotentialSpec& potential, const GridGeometry& geometry,
                                const Units& units, double t);

}  // namespace bohm
