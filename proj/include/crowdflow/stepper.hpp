#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "crowdflow/diagnostics.hpp"
#include "crowdflow/pressure.hpp"
#include "crowdflow/scenario.hpp"
#include "crowdflow/transport.hpp"

namespace crowdflow {

struct RunSettings {
    double horizon = 1.0;
    double dt_max = 0.0;
    double cadence = 0.0;
    double tol = 1e-10;
    std::size_t max_sweeps = 0;
    Phase mode = Phase::One;
    bool pressure = true;
    bool accelerate = true;
};

/// A realized, validated scenario: geometry, sampled velocity and operators.
/// Immutable once built; copy and edit `u0` or `term` to derive variants.
struct Problem {
    Problem(Grid grid, FaceField face_velocity, ReactionTerm term, ScalarField u0, RunSettings settings);

    Grid grid;
    FaceField face_velocity;
    ScalarField divergence;
    std::shared_ptr<const LaplacianOperator> laplacian;
    ReactionTerm term;
    ScalarField u0;
    RunSettings settings;

    /// Monotonicity bound for this problem's transport and reaction.
    double stable_dt() const;
    /// Step size actually used: stable_dt capped by settings.dt_max.
    double base_dt() const;
    /// Slack allowed above the density ceiling (10 x solver tolerance).
    double ceiling_slack() const;
};

/// Builds the problem, running the hypothesis checks eagerly: velocity
/// admissibility (unless exploratory), sampled reaction validation and the
/// bounds on u0. Throws ValidationError naming the violated hypothesis.
Problem make_problem(const Scenario& scenario);

struct Snapshot {
    double t = 0.0;
    ScalarField u;
    ScalarField p;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    double initial_mass = 0.0;
    /// State after every step (index 0 is the initial state), when recorded.
    std::vector<ScalarField> states;
    std::vector<double> state_times;

    std::size_t step_count() const noexcept { return diagnostics.size(); }
};

/// Source prescribed per step in place of g(t, x, u): f(step index, t).
using FrozenSource = std::function<ScalarField(std::size_t step, double t)>;

struct RunOptions {
    bool record_states = false;
    FrozenSource frozen_source;
};

/// Splitting loop: explicit transport-reaction step, then the projection
/// onto the density constraint. Throws ConvergenceError when a projection
/// does not converge.
Trajectory run(const Problem& problem, const RunOptions& options = {});
Trajectory run(const Scenario& scenario);

struct PicardResult {
    /// gaps[n - 1] = d_n = max_t ||u_n(t) - u_{n-1}(t)||_1, n = 1..iterations.
    std::vector<double> gaps;
    /// Last iterate, states recorded.
    Trajectory last;
};

/// Global fixed-point iteration: iterate 0 solves without reaction; iterate n
/// solves with the source frozen at g(t, x, u_{n-1}(t)) on the same time grid.
PicardResult picard_global(const Problem& problem, std::size_t iterations);

/// Spatially uniform sub/supersolution pair and the congestion-onset time.
struct Envelope {
    std::vector<double> times;
    std::vector<double> lower;  ///< omega_1
    std::vector<double> upper;  ///< omega_2
    double tau_c = 0.0;

    double lower_at(double t) const;
    double upper_at(double t) const;
};

/// Integrates omega_2' = max_K [g(t, x_K, omega_2) - omega_2 div V_K] and
/// omega_1' = min_K [g(t, x_K, omega_1) - omega_1 div V_K] with classical RK4.
/// tau_c is the first time omega_2 > 1, omega_1 < -1 or omega_1 > omega_2,
/// refined by bisection to dt_ode / 1024; T when none occurs.
Envelope integrate_envelope(const Grid& grid, const ScalarField& divergence, const ReactionTerm& term, double upper0,
                            double lower0, double horizon, double dt_ode);

struct EnvelopeBoundReport {
    double upper_excess = 0.0;  ///< max (u - min(1, omega_2))^+
    double lower_excess = 0.0;  ///< max (max(-1, omega_1) - u)^+
    double allowance = 0.0;
    bool passed = true;
};

/// Checks u <= min(1, omega_2) and u >= max(-1, omega_1) on every snapshot and
/// recorded state, up to `allowance`.
EnvelopeBoundReport verify_envelope_bound(const Trajectory& trajectory, const Envelope& envelope, double allowance);

/// Consistency-limited allowance 5e-3 + C (dt + h).
double discretization_allowance(double constant, double dt, double h);

}  // namespace crowdflow
