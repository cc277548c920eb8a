#include "bohm/potential.hpp"

#include <algorithm>
#include <cmath>

#include "bohm/errors.hpp"

namespace bohm {

double ModelPes2D::valley_floor(double x) const { return valley_shift * std::tanh(x / valley_length); }

double ModelPes2D::evaluate(double x, double y, double mass) const {
    const double dy = y - valley_floor(x);
    const double v = barrier_height * std::exp(-x * x / (barrier_width * barrier_width)) +
                     0.5 * mass * omega * omega * dy * dy;
    return std::min(v, cap);
}

bool is_time_dependent(const PotentialSpec& potential) {
    return std::holds_alternative<EffectiveWellPotential>(potential);
}

bool has_hard_wall(const PotentialSpec& potential) {
    return std::holds_alternative<EffectiveWellPotential>(potential);
}

PotentialNodes sample_potential(const PotentialSpec& potential, const GridGeometry& geometry,
                                const Units& units, double t) {
    struct Visitor {
        const GridGeometry& g;
        const Units& u;
        double t;

        PotentialNodes operator()(const FreePotential&) const {
            return PotentialNodes{std::vector<double>(g.size(), 0.0), {}};
        }
        PotentialNodes operator()(const EffectiveWellPotential& w) const {
            WellNodes nodes = potential_on_grid(w.params, g, t, w.include_well);
            return PotentialNodes{std::move(nodes.values), std::move(nodes.wall)};
        }
        PotentialNodes operator()(const ModelPes2D& pes) const {
            if (g.dimension != 2) throw InvalidParameter("model reaction surface needs a 2D grid");
            PotentialNodes out{std::vector<double>(g.size()), {}};
            for (std::size_t i = 0; i < g.size(); ++i) {
                const Vec2 r = g.node(i);
                out.values[i] = pes.evaluate(r.x, r.y, u.mass);
            }
            return out;
        }
        PotentialNodes operator()(const TabulatedPotential& tab) const {
            if (!(tab.geometry == g)) throw InvalidParameter("tabulated potential geometry mismatch");
            if (tab.values.size() != g.size()) throw InvalidParameter("tabulated potential size mismatch");
            return PotentialNodes{tab.values, {}};
        }
    };
    return std::visit(Visitor{geometry, units, t}, potential);
}

}  // namespace bohm
