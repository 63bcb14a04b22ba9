#include "crowdflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crowdflow {

FaceField upwind_fluxes(const Grid& grid, const FaceField& face_velocity, const ScalarField& u) {
    FaceField flux(grid.face_count());
    for (std::size_t fi = 0; fi < grid.face_count(); ++fi) {
        const Face& f = grid.face(fi);
        const double v = face_velocity[fi];
        switch (f.kind) {
        case FaceKind::Interior:
            flux[fi] = v >= 0.0 ? v * u[f.owner] : v * u[f.neighbor];
            break;
        case FaceKind::Dirichlet:
            // Inflow brings density 0.
            flux[fi] = v >= 0.0 ? v * u[f.owner] : 0.0;
            break;
        case FaceKind::Neumann:
            flux[fi] = 0.0;
            break;
        }
    }
    return flux;
}

namespace {

ScalarField divergence_of_flux(const Grid& grid, const FaceField& flux) {
    ScalarField div(grid.cell_count());
    const double inv_vol = 1.0 / grid.cell_volume();
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
        double sum = 0.0;
        for (const auto& cf : grid.cell_faces(k)) sum += cf.sign * flux[cf.face] * grid.face(cf.face).area;
        div[k] = sum * inv_vol;
    }
    return div;
}

double dirichlet_outflux(const Grid& grid, const FaceField& flux) {
    double sum = 0.0;
    for (std::size_t fi = 0; fi < grid.face_count(); ++fi) {
        const Face& f = grid.face(fi);
        if (f.kind == FaceKind::Dirichlet) sum += flux[fi] * f.area;
    }
    return sum;
}

void check_dt(double dt, const StepLimits& limits) {
    if (!(dt > 0.0) || dt > limits.max_dt * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " outside (0, " << limits.max_dt << "]: explicit update not monotone";
        throw StepSizeError(os.str());
    }
}

ExplicitStep finish(const ScalarField& u, double dt, const Grid& grid, const FaceField& flux,
                    const ScalarField& source) {
    const ScalarField div = divergence_of_flux(grid, flux);
    ExplicitStep step;
    step.u_star = ScalarField(u.size());
    double source_sum = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        step.u_star[k] = u[k] - dt * div[k] + dt * source[k];
        source_sum += source[k];
    }
    step.advective_outflux = dt * dirichlet_outflux(grid, flux);
    step.reaction_integral = dt * source_sum * grid.cell_volume();
    return step;
}

}  // namespace

ScalarField upwind_divergence(const Grid& grid, const FaceField& face_velocity, const ScalarField& u) {
    return divergence_of_flux(grid, upwind_fluxes(grid, face_velocity, u));
}

double stable_dt(const Grid& grid, const FaceField& face_velocity, double lipschitz, const ScalarField& divergence,
                 double horizon) {
    double max_out = 0.0;
    const double inv_vol = 1.0 / grid.cell_volume();
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
        double out = 0.0;
        for (const auto& cf : grid.cell_faces(k)) {
            const Face& f = grid.face(cf.face);
            if (f.kind == FaceKind::Neumann) continue;
            out += std::max(cf.sign * face_velocity[cf.face], 0.0) * f.area;
        }
        max_out = std::max(max_out, out * inv_vol);
    }
    double max_div = 0.0;
    for (double d : divergence) max_div = std::max(max_div, std::abs(d));
    const double denom = max_out + lipschitz + max_div;
    if (denom <= 0.0) return horizon;
    return kDtSafety / denom;
}

ExplicitStep explicit_step(const ScalarField& u, double dt, const Grid& grid, const FaceField& face_velocity,
                           const ReactionTerm& term, double t, const StepLimits& limits) {
    check_dt(dt, limits);
    ScalarField source(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) source[k] = evaluate_reaction(term, t, k, u[k], limits.slack);
    return finish(u, dt, grid, upwind_fluxes(grid, face_velocity, u), source);
}

ExplicitStep explicit_step_with_source(const ScalarField& u, double dt, const Grid& grid,
                                       const FaceField& face_velocity, const ScalarField& source,
                                       const StepLimits& limits) {
    check_dt(dt, limits);
    return finish(u, dt, grid, upwind_fluxes(grid, face_velocity, u), source);
}

}  // namespace crowdflow
