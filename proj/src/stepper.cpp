#include "crowdflow/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace crowdflow {

Problem::Problem(Grid grid_, FaceField face_velocity_, ReactionTerm term_, ScalarField u0_, RunSettings settings_)
    : grid(std::move(grid_)),
      face_velocity(std::move(face_velocity_)),
      laplacian(std::make_shared<const LaplacianOperator>(assemble_laplacian(grid))),
      term(std::move(term_)),
      u0(std::move(u0_)),
      settings(settings_) {
    if (face_velocity.size() != grid.face_count()) throw ConfigError("face velocity does not match grid");
    if (u0.size() != grid.cell_count()) throw ConfigError("initial density does not match grid");
    if (!(settings.horizon > 0.0)) throw ConfigError("time horizon must be positive");
    if (settings.cadence < 0.0 || settings.dt_max < 0.0) throw ConfigError("cadence and dt_max must be >= 0");
    divergence = divergence_of_velocity(grid, face_velocity);
}

double Problem::stable_dt() const {
    return crowdflow::stable_dt(grid, face_velocity, term.lipschitz(), divergence, settings.horizon);
}

double Problem::base_dt() const {
    const double dt = stable_dt();
    return settings.dt_max > 0.0 ? std::min(dt, settings.dt_max) : dt;
}

double Problem::ceiling_slack() const { return std::max(kReactionSlack, 10.0 * settings.tol); }

Problem make_problem(const Scenario& s) {
    Grid grid = build_grid(s.nx, s.ny, s.extent, s.boundary);
    FaceField velocity = sample_face_velocity(grid, s.velocity, s.neumann_walls);
    const AdmissibilityReport adm = check_velocity_admissibility(grid, velocity, s.solver.admissibility_tol);
    if (!adm.passed() && !s.exploratory) {
        std::ostringstream os;
        os << "HypV0 violated on " << adm.offending_faces.size() << " faces (min V.nu on Dirichlet "
           << adm.min_dirichlet << ", max |V.nu| on Neumann " << adm.max_neumann << ")";
        throw ValidationError("HypV0", os.str());
    }

    ReactionTerm term = make_reaction(s.reaction, grid.cell_count());
    std::vector<double> t_samples{0.0, 0.5 * s.time.horizon, s.time.horizon};
    if (s.reaction.growth)
        for (double t : s.reaction.growth->times) t_samples.push_back(t);
    const ValidationReport val = validate_assumptions(term, grid, t_samples);
    if (!val.g1_ok) throw ValidationError("G1", "G1 violated: g(., +-1) is not finite on the samples");
    if (!val.lipschitz_ok) {
        std::ostringstream os;
        os << "declared Lipschitz constant " << val.declared_lipschitz << " below sampled " << val.sampled_lipschitz;
        throw ValidationError("Lipschitz", os.str());
    }
    if (!val.growth_ok || !val.explicit_bound_ok) {
        std::ostringstream os;
        os << "G2 violated: one-sided growth exceeds R(t) by " << val.growth_violation;
        throw ValidationError("G2", os.str());
    }

    ScalarField u0 = make_initial(s.initial, grid);
    const double lower = s.mode == Phase::One ? 0.0 : -1.0;
    for (std::size_t k = 0; k < u0.size(); ++k) {
        if (!(u0[k] >= lower && u0[k] <= 1.0)) {
            std::ostringstream os;
            if (std::abs(u0[k]) <= 1.0)
                os << "0 ≤ u₀ ≤ 1 violated (one-phase): u0=" << u0[k] << " at cell " << k;
            else
                os << "|u₀| ≤ 1 violated: u0=" << u0[k] << " at cell " << k;
            throw ValidationError("u0", os.str());
        }
    }

    RunSettings settings;
    settings.horizon = s.time.horizon;
    settings.dt_max = s.time.dt_max;
    settings.cadence = s.time.cadence;
    settings.tol = s.solver.tol;
    settings.max_sweeps = s.solver.max_sweeps;
    settings.mode = s.mode;
    settings.pressure = s.solver.pressure;
    settings.accelerate = s.solver.accelerate;
    return Problem(std::move(grid), std::move(velocity), std::move(term), std::move(u0), settings);
}

namespace {

std::vector<double> snapshot_targets(const RunSettings& s) {
    std::vector<double> targets;
    if (s.cadence > 0.0) {
        for (std::size_t k = 1;; ++k) {
            const double t = static_cast<double>(k) * s.cadence;
            if (t >= s.horizon * (1.0 - 1e-12)) break;
            targets.push_back(t);
        }
    }
    targets.push_back(s.horizon);
    return targets;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Trajectory run(const Problem& problem, const RunOptions& options) {
    const Grid& grid = problem.grid;
    const RunSettings& s = problem.settings;
    const double monotone_dt = problem.stable_dt();
    const double base_dt = problem.base_dt();
    const StepLimits limits{monotone_dt, problem.ceiling_slack()};

    PgsOptions pgs;
    pgs.tol = s.tol;
    pgs.max_sweeps = s.max_sweeps;
    pgs.accelerate = s.accelerate;

    Trajectory traj;
    ScalarField u = problem.u0;
    ScalarField p(grid.cell_count());
    double t = 0.0;
    traj.initial_mass = integrate(grid, u);
    traj.snapshots.push_back({0.0, u, p});
    if (options.record_states) {
        traj.states.push_back(u);
        traj.state_times.push_back(0.0);
    }

    std::size_t step = 0;
    for (double target : snapshot_targets(s)) {
        while (t < target) {
            const bool last = target - t <= base_dt;
            const double dt = last ? target - t : base_dt;

            const ExplicitStep ex =
                options.frozen_source
                    ? explicit_step_with_source(u, dt, grid, problem.face_velocity, options.frozen_source(step, t),
                                                limits)
                    : explicit_step(u, dt, grid, problem.face_velocity, problem.term, t, limits);

            StepDiagnostics d;
            if (s.pressure) {
                pgs.initial = p;
                ProjectionResult pr = s.mode == Phase::One
                                          ? projection_step_one_phase(ex.u_star, dt, grid, problem.laplacian, pgs)
                                          : projection_step_two_phase(ex.u_star, dt, grid, problem.laplacian, pgs);
                u = std::move(pr.u);
                p = std::move(pr.p);
                d.comp_residual = pr.residual;
                d.pressure_outflux_D = pr.pressure_outflux;
                d.sweeps = pr.sweeps;
                d.newton_iterations = pr.newton_iterations;
            } else {
                u = ex.u_star;
                p = ScalarField(grid.cell_count());
                d.comp_residual = s.mode == Phase::One ? complementarity_residual_one_phase(u, p)
                                                       : complementarity_residual_two_phase(u, p);
            }

            t = last ? target : t + dt;
            ++step;
            d.step = step;
            d.t = t;
            d.dt = dt;
            d.mass = integrate(grid, u);
            d.adv_outflux_D = ex.advective_outflux;
            d.reaction_integral = ex.reaction_integral;
            d.p_max = max_abs(p);
            d.pressure_energy = dt * pressure_gradient_energy(grid, p) / 3.0;
            const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
            d.u_min = *lo;
            d.u_max = *hi;
            traj.diagnostics.push_back(d);
            if (options.record_states) {
                traj.states.push_back(u);
                traj.state_times.push_back(t);
            }
        }
        traj.snapshots.push_back({t, u, p});
    }
    return traj;
}

Trajectory run(const Scenario& scenario) { return run(make_problem(scenario)); }

PicardResult picard_global(const Problem& problem, std::size_t iterations) {
    if (iterations < 1) throw ConfigError("Picard iteration needs at least one iteration");
    const std::size_t n = problem.grid.cell_count();
    const double slack = problem.ceiling_slack();

    RunOptions first;
    first.record_states = true;
    first.frozen_source = [n](std::size_t, double) { return ScalarField(n); };
    Trajectory previous = run(problem, first);

    PicardResult result;
    for (std::size_t it = 1; it <= iterations; ++it) {
        RunOptions opts;
        opts.record_states = true;
        opts.frozen_source = [&previous, &problem, n, slack](std::size_t step, double t) {
            const ScalarField& u = previous.states[step];
            ScalarField f(n);
            for (std::size_t k = 0; k < n; ++k) f[k] = evaluate_reaction(problem.term, t, k, u[k], slack);
            return f;
        };
        Trajectory next = run(problem, opts);
        double gap = 0.0;
        for (std::size_t k = 0; k < next.states.size(); ++k)
            gap = std::max(gap, l1_distance(problem.grid, next.states[k], previous.states[k]));
        result.gaps.push_back(gap);
        previous = std::move(next);
    }
    result.last = std::move(previous);
    return result;
}

namespace {

double interpolate(const std::vector<double>& times, const std::vector<double>& values, double t) {
    if (times.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * values[i - 1] + w * values[i];
}

}  // namespace

double Envelope::lower_at(double t) const { return interpolate(times, lower, t); }
double Envelope::upper_at(double t) const { return interpolate(times, upper, t); }

Envelope integrate_envelope(const Grid& grid, const ScalarField& divergence, const ReactionTerm& term, double upper0,
                            double lower0, double horizon, double dt_ode) {
    if (!(-1.0 <= lower0 && lower0 <= upper0 && upper0 <= 1.0))
        throw ConfigError("envelope needs -1 <= omega_1(0) <= omega_2(0) <= 1");
    if (!(dt_ode > 0.0) || !(horizon > 0.0)) throw ConfigError("envelope needs positive horizon and dt_ode");
    const std::size_t n = grid.cell_count();

    struct State {
        double lower;
        double upper;
    };
    auto rhs = [&](double t, State w) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            hi = std::max(hi, term(t, k, w.upper) - w.upper * divergence[k]);
            lo = std::min(lo, term(t, k, w.lower) - w.lower * divergence[k]);
        }
        if (!std::isfinite(hi) || !std::isfinite(lo)) {
            std::ostringstream os;
            os << "non-finite envelope right-hand side at t=" << t;
            throw FieldError(os.str());
        }
        return State{lo, hi};
    };
    auto rk4 = [&](double t, State w, double h) {
        const State k1 = rhs(t, w);
        const State k2 = rhs(t + 0.5 * h, {w.lower + 0.5 * h * k1.lower, w.upper + 0.5 * h * k1.upper});
        const State k3 = rhs(t + 0.5 * h, {w.lower + 0.5 * h * k2.lower, w.upper + 0.5 * h * k2.upper});
        const State k4 = rhs(t + h, {w.lower + h * k3.lower, w.upper + h * k3.upper});
        return State{w.lower + h / 6.0 * (k1.lower + 2.0 * k2.lower + 2.0 * k3.lower + k4.lower),
                     w.upper + h / 6.0 * (k1.upper + 2.0 * k2.upper + 2.0 * k3.upper + k4.upper)};
    };
    constexpr double eps = 1e-12;
    auto violated = [](State w) { return w.upper > 1.0 + eps || w.lower < -1.0 - eps || w.lower > w.upper + eps; };

    Envelope env;
    env.tau_c = horizon;
    bool found = false;
    State w{lower0, upper0};
    double t = 0.0;
    env.times.push_back(t);
    env.lower.push_back(w.lower);
    env.upper.push_back(w.upper);
    while (t < horizon) {
        const double h = std::min(dt_ode, horizon - t);
        const State next = rk4(t, w, h);
        if (!found && violated(next)) {
            // Bisect on the length of a single step from the last good sample.
            double a = 0.0;
            double b = h;
            while (b - a > dt_ode / 1024.0) {
                const double mid = 0.5 * (a + b);
                if (violated(rk4(t, w, mid)))
                    b = mid;
                else
                    a = mid;
            }
            env.tau_c = t + 0.5 * (a + b);
            found = true;
        }
        t = horizon - t <= dt_ode ? horizon : t + h;
        w = next;
        env.times.push_back(t);
        env.lower.push_back(w.lower);
        env.upper.push_back(w.upper);
    }
    return env;
}

EnvelopeBoundReport verify_envelope_bound(const Trajectory& trajectory, const Envelope& envelope, double allowance) {
    EnvelopeBoundReport report;
    report.allowance = allowance;
    auto check = [&](double t, const ScalarField& u) {
        const double hi = std::min(1.0, envelope.upper_at(t));
        const double lo = std::max(-1.0, envelope.lower_at(t));
        for (double v : u) {
            report.upper_excess = std::max(report.upper_excess, v - hi);
            report.lower_excess = std::max(report.lower_excess, lo - v);
        }
    };
    for (const auto& snap : trajectory.snapshots) check(snap.t, snap.u);
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) check(trajectory.state_times[k], trajectory.states[k]);
    report.passed = report.upper_excess <= allowance && report.lower_excess <= allowance;
    return report;
}

double discretization_allowance(double constant, double dt, double h) { return 5e-3 + constant * (dt + h); }

}  // namespace crowdflow
