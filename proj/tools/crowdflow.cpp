// crowdflow command-line front end: run, check, picard, compare, oracle.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "crowdflow/analysis.hpp"
#include "crowdflow/output.hpp"

using namespace crowdflow;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNoConvergence = 3;

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::vector<double> check_times(const Scenario& sc) {
    std::vector<double> t{0.0, 0.5 * sc.time.horizon, sc.time.horizon};
    if (sc.reaction.growth)
        for (double v : sc.reaction.growth->times) t.push_back(v);
    return t;
}

int cmd_run(const std::string& path, const std::string& out_dir) {
    const Scenario sc = load_scenario_file(path);
    const Problem problem = make_problem(sc);
    const Trajectory traj = run(problem);
    double max_u = -INFINITY;
    double max_res = 0.0;
    double max_p = 0.0;
    for (const auto& d : traj.diagnostics) {
        max_u = std::max(max_u, d.u_max);
        max_res = std::max(max_res, d.comp_residual);
        max_p = std::max(max_p, d.p_max);
    }
    std::printf("scenario %s: %zu steps, dt %.6g, %zu snapshots\n", sc.name.c_str(), traj.step_count(),
                problem.base_dt(), traj.snapshots.size());
    std::printf("max u %.12g  max |p| %.6g  max complementarity residual %.3g  ledger defect %.3g\n", max_u, max_p,
                max_res, mass_ledger_defect(traj));
    if (!out_dir.empty()) {
        const auto files = write_outputs(traj, sc, problem.grid, out_dir);
        std::printf("wrote %zu files to %s\n", files.size(), out_dir.c_str());
    }
    return kOk;
}

void print_condition(const char* name, const ConditionCheck& c) {
    std::printf("  %-14s margin %+.6g (cell %zu, t %.6g)  %s\n", name, c.margin, c.cell, c.t, verdict(c.passed));
}

int cmd_check(const std::string& path) {
    const Scenario sc = load_scenario_file(path);
    bool required_ok = true;

    const Grid grid = build_grid(sc.nx, sc.ny, sc.extent, sc.boundary);
    std::printf("grid %zux%zu, %zu Dirichlet faces, %zu Neumann faces\n", grid.nx(), grid.ny(),
                grid.boundary_face_count(FaceKind::Dirichlet), grid.boundary_face_count(FaceKind::Neumann));
    const FaceField velocity = sample_face_velocity(grid, sc.velocity, sc.neumann_walls);
    const AdmissibilityReport adm = check_velocity_admissibility(grid, velocity, sc.solver.admissibility_tol);
    std::printf("HypV0: min V.nu on Dirichlet %+.6g, max |V.nu| on Neumann %.6g, %zu offending faces  %s\n",
                adm.min_dirichlet, adm.max_neumann, adm.offending_faces.size(), verdict(adm.passed()));
    required_ok = required_ok && (adm.passed() || sc.exploratory);

    const ReactionTerm term = make_reaction(sc.reaction, grid.cell_count());
    const auto times = check_times(sc);
    const ValidationReport val = validate_assumptions(term, grid, times);
    std::printf("reaction %s: declared L_g %.6g, sampled %.6g\n", term.id().c_str(), val.declared_lipschitz,
                val.sampled_lipschitz);
    std::printf("  %-14s g+(-1) max %.6g, g-(1) max %.6g  %s\n", "G1", val.max_positive_at_minus_one,
                val.max_negative_at_plus_one, verdict(val.g1_ok));
    std::printf("  %-14s %s\n", "Lipschitz", verdict(val.lipschitz_ok));
    std::printf("  %-14s excess %.6g  %s\n", "G2", val.growth_violation, verdict(val.growth_ok));
    std::printf("  %-14s excess %.6g  %s\n", "explicit bound", val.explicit_bound_violation,
                verdict(val.explicit_bound_ok));
    required_ok = required_ok && val.passed();

    const ScalarField div = divergence_of_velocity(grid, velocity);
    const ConditionReport cond = check_congestion_free(term, div, times);
    std::printf("congestion conditions:\n");
    print_condition("G3", cond.g3);
    print_condition("G4", cond.g4);
    print_condition("G5", cond.g5);
    if (cond.compressibility) print_condition("condcompress", *cond.compressibility);

    const ScalarField u0 = make_initial(sc.initial, grid);
    const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
    const double floor = sc.mode == Phase::One ? 0.0 : -1.0;
    const bool u0_ok = *lo >= floor && *hi <= 1.0;
    std::printf("u0 range [%.6g, %.6g]  %s\n", *lo, *hi, verdict(u0_ok));
    required_ok = required_ok && u0_ok;

    if (u0_ok) {
        const Envelope env =
            integrate_envelope(grid, div, term, *hi, *lo, sc.time.horizon, sc.time.horizon / 1000.0);
        std::printf("envelope: omega_2(T) %.6g, omega_1(T) %.6g, tau_c %.6g%s\n", env.upper.back(), env.lower.back(),
                    env.tau_c, env.tau_c < sc.time.horizon ? " (congestion possible)" : "");
    }
    std::printf("hypotheses %s\n", verdict(required_ok));
    return required_ok ? kOk : kInvalid;
}

int cmd_picard(const std::string& path, std::size_t iters) {
    const Scenario sc = load_scenario_file(path);
    const Problem problem = make_problem(sc);
    const PicardResult res = picard_global(problem, iters);
    const double LT = problem.term.lipschitz() * problem.settings.horizon;
    std::printf("L_g T = %.6g\n", LT);
    std::printf("%4s %14s %12s %14s %14s\n", "n", "d_n", "d_n/d_{n-1}", "d_n/d_1", "bound");
    // d_n <= (L_g T)^(n-1) / (n-2)! d_1 for n >= 2.
    double bound = 1.0;
    for (std::size_t n = 1; n <= res.gaps.size(); ++n) {
        if (n == 2) bound = LT;
        if (n > 2) bound *= LT / static_cast<double>(n - 2);
        const double d = res.gaps[n - 1];
        const double ratio = n > 1 && res.gaps[n - 2] > 0.0 ? d / res.gaps[n - 2] : NAN;
        const double relative = res.gaps[0] > 0.0 ? d / res.gaps[0] : NAN;
        std::printf("%4zu %14.6e %12.6g %14.6e %14.6e\n", n, d, ratio, relative, bound);
    }
    RunOptions opts;
    opts.record_states = true;
    const Trajectory direct = run(problem, opts);
    double dist = 0.0;
    for (std::size_t k = 0; k < direct.states.size() && k < res.last.states.size(); ++k)
        dist = std::max(dist, l1_distance(problem.grid, direct.states[k], res.last.states[k]));
    std::printf("sup_t L1 distance between last iterate and direct run: %.6e\n", dist);
    return kOk;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, double r_bound) {
    const Scenario sa = load_scenario_file(path_a);
    const Scenario sb = load_scenario_file(path_b);
    const Problem pa = make_problem(sa);
    const Problem pb = make_problem(sb);
    RunOptions opts;
    opts.record_states = true;
    const Trajectory ta = run(pa, opts);
    const Trajectory tb = run(pb, opts);
    const GrowthBound growth = std::isnan(r_bound) ? pa.term.growth() : GrowthBound::constant(r_bound);
    const ContractionReport contraction = compare_runs(pa.grid, ta, tb, growth);
    std::printf("%12s %16s %16s\n", "t", "||u1-u2||_1", "envelope");
    for (std::size_t k = 0; k < contraction.times.size(); ++k)
        std::printf("%12.6g %16.9e %16.9e\n", contraction.times[k], contraction.distances[k],
                    contraction.envelopes[k]);
    std::printf("contraction: worst ratio %.6g  %s\n", contraction.worst_ratio, verdict(contraction.passed));

    const OrderReport forward = check_order(ta, tb);
    const OrderReport backward = check_order(tb, ta);
    if (forward.precondition_ok)
        std::printf("order u_A <= u_B: max violation %.3e  %s\n", forward.max_violation, verdict(forward.passed));
    else if (backward.precondition_ok)
        std::printf("order u_B <= u_A: max violation %.3e  %s\n", backward.max_violation, verdict(backward.passed));
    else
        std::printf("order: initial data are not ordered (cell %zu), comparison skipped\n", forward.witness_cell);
    return contraction.passed ? kOk : kInvalid;
}

int cmd_oracle(const std::string& path) {
    const Scenario sc = load_scenario_file(path);
    const Problem problem = make_problem(sc);
    if (problem.grid.cell_count() > 20) {
        std::fprintf(stderr, "oracle: %zu cells, enumeration is limited to 20\n", problem.grid.cell_count());
        return kInvalid;
    }
    const double dt = problem.base_dt();
    const ExplicitStep ex = explicit_step(problem.u0, dt, problem.grid, problem.face_velocity, problem.term, 0.0,
                                          StepLimits{problem.stable_dt(), problem.ceiling_slack()});
    LcpProblem lcp{problem.laplacian, dt, ScalarField(ex.u_star.size())};
    for (std::size_t k = 0; k < lcp.q.size(); ++k) lcp.q[k] = 1.0 - ex.u_star[k];
    PgsOptions pgs;
    pgs.tol = problem.settings.tol;
    pgs.max_sweeps = problem.settings.max_sweeps;
    const LcpSolution sol = lcp_solve_pgs(lcp, pgs);
    const ScalarField exact = lcp_oracle_enumerate(lcp);
    double diff = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) diff = std::max(diff, std::abs(sol.p[k] - exact[k]));
    std::printf("first projection: dt %.6g, %zu PGS sweeps, residual %.3e\n", dt, sol.sweeps, sol.residual);
    std::printf("max |p_pgs - p_oracle| = %.3e  %s\n", diff, verdict(diff <= 1e-10));
    return diff <= 1e-10 ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdflow: congested crowd motion with Hele-Shaw pressure"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string scenario;
    std::string scenario_b;
    std::string out_dir;
    std::size_t iters = 6;
    double r_bound = NAN;

    auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write outputs");
    run_cmd->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "output directory");

    auto* check_cmd = app.add_subcommand("check", "report hypothesis checks without simulating");
    check_cmd->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);

    auto* picard_cmd = app.add_subcommand("picard", "global Picard iteration and its gap table");
    picard_cmd->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
    picard_cmd->add_option("--iters", iters, "number of iterations")->check(CLI::PositiveNumber);

    auto* compare_cmd = app.add_subcommand("compare", "contraction and comparison reports for two scenarios");
    compare_cmd->add_option("scenario_a", scenario, "first scenario")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("scenario_b", scenario_b, "second scenario")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--r-bound", r_bound, "growth bound R (default: the first scenario's)");

    auto* oracle_cmd = app.add_subcommand("oracle", "cross-check the first projection against enumeration");
    oracle_cmd->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(scenario, out_dir);
        if (check_cmd->parsed()) return cmd_check(scenario);
        if (picard_cmd->parsed()) return cmd_picard(scenario, iters);
        if (compare_cmd->parsed()) return cmd_compare(scenario, scenario_b, r_bound);
        if (oracle_cmd->parsed()) return cmd_oracle(scenario);
    } catch (const ValidationError& e) {
        std::cerr << "validation failed [" << e.hypothesis() << "]: " << e.what() << '\n';
        return kInvalid;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kInvalid;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kInvalid;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver did not converge: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
