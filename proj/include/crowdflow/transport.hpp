#pragma once

#include "crowdflow/fields.hpp"
#include "crowdflow/reaction.hpp"

namespace crowdflow {

/// Fraction of the monotonicity limit used by stable_dt.
inline constexpr double kDtSafety = 0.9;

/// Upwind advective fluxes Phi_f (per unit area, along the face normal) for
/// the density u. Interior faces take the upwind cell value; Dirichlet faces
/// carry outflow with the interior value and zero inflow; Neumann faces carry
/// nothing.
FaceField upwind_fluxes(const Grid& grid, const FaceField& face_velocity, const ScalarField& u);

/// Discrete div(u V) per cell, (1/|K|) sum_f Phi_f A_f with outward signs.
/// Each cell sums its faces in the grid's fixed incidence order.
ScalarField upwind_divergence(const Grid& grid, const FaceField& face_velocity, const ScalarField& u);

/// Largest step keeping the explicit transport-reaction map order-preserving:
/// safety / (max_K sum_f (V.nu_f)^+ A_f / |K| + L_g + max_K |div V_K|).
/// Returns `horizon` when the denominator vanishes.
double stable_dt(const Grid& grid, const FaceField& face_velocity, double lipschitz, const ScalarField& divergence,
                 double horizon);

/// Outcome of one explicit step, with the per-step ledger terms.
struct ExplicitStep {
    ScalarField u_star;
    double advective_outflux = 0.0;  ///< dt * sum over Dirichlet faces of Phi_f A_f
    double reaction_integral = 0.0;  ///< dt * sum_K |K| g_K
};

struct StepLimits {
    /// Upper bound dt must respect (usually stable_dt's output).
    double max_dt;
    /// Slack for the reaction's state domain check.
    double slack = kReactionSlack;
};

/// u* = u - dt div_h(u V) + dt g(t, x, u). Throws StepSizeError when
/// dt > limits.max_dt.
ExplicitStep explicit_step(const ScalarField& u, double dt, const Grid& grid, const FaceField& face_velocity,
                           const ReactionTerm& term, double t, const StepLimits& limits);

/// Same update with a prescribed source f in place of g(t, x, u).
ExplicitStep explicit_step_with_source(const ScalarField& u, double dt, const Grid& grid,
                                       const FaceField& face_velocity, const ScalarField& source,
                                       const StepLimits& limits);

}  // namespace crowdflow
