#include "crowdflow/scenario.hpp"

#include <cmath>

namespace crowdflow {

std::string to_string(Phase phase) { return phase == Phase::One ? "one_phase" : "two_phase"; }

ReactionTerm make_reaction(const ReactionSpec& spec, std::size_t cell_count) {
    auto check_cells = [&](const std::vector<double>& v, const char* what) {
        if (v.size() != 1 && v.size() != cell_count)
            throw ConfigError(std::string("absorption ") + what + " needs 1 or " + std::to_string(cell_count) +
                              " values, got " + std::to_string(v.size()));
    };
    ReactionTerm term = ReactionTerm::zero();
    if (spec.type == "zero") {
        term = ReactionTerm::zero();
    } else if (spec.type == "constant") {
        term = ReactionTerm::constant(spec.value);
    } else if (spec.type == "absorption") {
        check_cells(spec.alpha, "alpha");
        check_cells(spec.u_eq, "u_eq");
        term = ReactionTerm::absorption(AbsorptionParams{spec.alpha, spec.u_eq});
    } else if (spec.type == "tabulated") {
        term = ReactionTerm::tabulated(spec.r, spec.g);
    } else if (spec.type == "two_phase") {
        if (spec.parts.size() != 2) throw ConfigError("two_phase reaction needs exactly two parts");
        term = ReactionTerm::two_phase(make_reaction(spec.parts[0], cell_count), make_reaction(spec.parts[1], cell_count));
    } else {
        throw ConfigError("unknown reaction type '" + spec.type + "'");
    }
    if (spec.lipschitz) term = term.with_lipschitz(*spec.lipschitz);
    if (spec.growth) term = term.with_growth(*spec.growth);
    return term;
}

ScalarField make_initial(const InitialSpec& spec, const Grid& grid) {
    const std::size_t n = grid.cell_count();
    ScalarField u(n);
    if (spec.type == "constant") {
        for (auto& v : u) v = spec.value;
    } else if (spec.type == "table") {
        if (spec.values.size() != n)
            throw ConfigError("initial table has " + std::to_string(spec.values.size()) + " values, grid has " +
                              std::to_string(n) + " cells");
        u = ScalarField(spec.values);
    } else if (spec.type == "box") {
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 c = grid.cell_center(k);
            const bool inside = c.x >= spec.box.xmin && c.x <= spec.box.xmax && c.y >= spec.box.ymin &&
                                c.y <= spec.box.ymax;
            u[k] = inside ? spec.value : spec.background;
        }
    } else if (spec.type == "disk") {
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 d = grid.cell_center(k) - spec.center;
            u[k] = std::hypot(d.x, d.y) <= spec.radius ? spec.value : spec.background;
        }
    } else {
        throw ConfigError("unknown initial profile '" + spec.type + "'");
    }
    return u;
}

}  // namespace crowdflow
