// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "crowdflow/analysis.hpp"

using namespace crowdflow;

namespace {

// Pinned tolerances.
constexpr double kCeilingTol = 1e-9;
constexpr double kComplementarityTol = 1e-9;
constexpr double kOracleTol = 1e-10;
constexpr double kOrderTol = 1e-9;
constexpr double kGronwallSlack = 5e-3;
constexpr double kPressureZeroTol = 1e-9;
constexpr double kEnvelopeDtFactor = 5.0;
constexpr double kAllowanceConstant = 1.0;
constexpr double kPicardRatioCap = 0.75;
constexpr double kPicardDecay = 1e-3;
constexpr double kLedgerTolPerCell = 1e-12;
constexpr double kEnergyFactor = 2.0;

constexpr auto D = BoundaryTag::Dirichlet;
constexpr auto N = BoundaryTag::Neumann;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

private:
    std::mt19937_64 rng_;
};

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
    std::printf("criterion %2d %-34s %s  (%s; %.2f s)\n", id, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

BoundarySpec sides(BoundaryTag l, BoundaryTag r, BoundaryTag b, BoundaryTag t) {
    BoundarySpec spec;
    spec.side(Side::Left) = l;
    spec.side(Side::Right) = r;
    spec.side(Side::Bottom) = b;
    spec.side(Side::Top) = t;
    return spec;
}

BoundarySpec walls_with_exit(Side side, double from, double to) {
    BoundarySpec spec = BoundarySpec::uniform(N);
    spec.patches.push_back({side, from, to, D});
    return spec;
}

ReactionSpec absorption(double alpha, double ueq) {
    ReactionSpec r;
    r.type = "absorption";
    r.alpha = {alpha};
    r.u_eq = {ueq};
    return r;
}

ReactionSpec tabulated(std::vector<double> r, std::vector<double> g) {
    ReactionSpec spec;
    spec.type = "tabulated";
    spec.r = std::move(r);
    spec.g = std::move(g);
    return spec;
}

InitialSpec constant(double v) {
    InitialSpec init;
    init.value = v;
    return init;
}

InitialSpec disk(Vec2 center, double radius, double value, double background) {
    InitialSpec init;
    init.type = "disk";
    init.center = center;
    init.radius = radius;
    init.value = value;
    init.background = background;
    return init;
}

InitialSpec table(const std::vector<double>& values) {
    InitialSpec init;
    init.type = "table";
    init.values = values;
    return init;
}

Scenario make(const std::string& name, std::size_t n, BoundarySpec boundary, VelocityDef velocity,
              ReactionSpec reaction, InitialSpec initial, double horizon, std::size_t steps) {
    Scenario s;
    s.name = name;
    s.nx = n;
    s.ny = n;
    s.boundary = std::move(boundary);
    s.velocity = std::move(velocity);
    s.reaction = std::move(reaction);
    s.initial = std::move(initial);
    s.time.horizon = horizon;
    s.time.dt_max = horizon / static_cast<double>(steps);
    s.time.cadence = horizon / 10.0;
    return s;
}

// Congested crowd pushed toward a doorway in the right wall.
Scenario doorway(std::size_t n, std::size_t steps) {
    return make("doorway-" + std::to_string(n), n, walls_with_exit(Side::Right, 0.4, 0.6),
                RadialVelocity{{1.2, 0.5}, -1.0}, absorption(1.0, 0.5), constant(0.8), 1.0, steps);
}

std::vector<Scenario> suite() {
    std::vector<Scenario> s;
    s.push_back(doorway(16, 200));
    s.push_back(doorway(32, 300));
    s.push_back(doorway(64, 250));
    s.push_back(make("corner-exit", 24, walls_with_exit(Side::Bottom, 0.0, 0.2), RadialVelocity{{-0.2, -0.2}, -1.0},
                     ReactionSpec{}, constant(0.9), 1.0, 400));
    s.push_back(make("two-doors", 32, sides(D, D, N, N), AffineVelocity{2.0, 0.0, 0.0, 0.0, {-1.0, 0.0}},
                     [] {
                         ReactionSpec r;
                         r.type = "constant";
                         r.value = 3.0;
                         return r;
                     }(),
                     constant(0.9), 0.5, 300));
    s.push_back(make("stirred-source", 24, BoundarySpec::uniform(D), CellularVelocity{1.0, 1, 1},
                     [] {
                         ReactionSpec r;
                         r.type = "constant";
                         r.value = 1.0;
                         return r;
                     }(),
                     disk({0.5, 0.5}, 0.3, 0.9, 0.4), 1.0, 300));
    s.push_back(make("block-drift", 20, sides(N, D, N, N), ConstantVelocity{{1.0, 0.0}}, ReactionSpec{}, [] {
        InitialSpec init;
        init.type = "box";
        init.box = {0.1, 0.2, 0.6, 0.8};
        init.value = 1.0;
        init.background = 0.3;
        return init;
    }(), 0.5, 200));
    s.push_back(make("logistic-crowd", 40, walls_with_exit(Side::Top, 0.3, 0.7), RadialVelocity{{0.5, 1.3}, -1.5},
                     tabulated({0.0, 0.5, 1.0}, {0.0, 0.25, 0.0}), disk({0.5, 0.4}, 0.25, 1.0, 0.5), 1.0, 500));
    s.push_back(make("packed-disk", 20, walls_with_exit(Side::Right, 0.3, 0.7), RadialVelocity{{1.1, 0.5}, -2.0},
                     absorption(0.5, 0.8), disk({0.4, 0.5}, 0.3, 1.0, 0.2), 1.0, 1000));
    s.push_back(make("sink-48", 48, walls_with_exit(Side::Left, 0.45, 0.55), RadialVelocity{{-0.3, 0.5}, -1.0},
                     absorption(2.0, 0.9), constant(0.95), 0.5, 250));
    return s;
}

struct SuiteRun {
    std::string name;
    std::size_t cells = 0;
    Trajectory traj;
};

std::vector<SuiteRun> suite_runs;

// 1. Ceiling and complementarity on every step of every suite scenario.
void criterion_ceiling() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_u = 0.0;
    double worst_res = 0.0;
    std::size_t min_steps = SIZE_MAX;
    std::size_t max_steps = 0;
    bool any_pressure = false;
    for (const Scenario& sc : suite()) {
        const Problem problem = make_problem(sc);
        SuiteRun r{sc.name, problem.grid.cell_count(), run(problem)};
        min_steps = std::min(min_steps, r.traj.step_count());
        max_steps = std::max(max_steps, r.traj.step_count());
        for (const auto& d : r.traj.diagnostics) {
            worst_u = std::max(worst_u, d.u_max);
            worst_res = std::max(worst_res, d.comp_residual);
            any_pressure = any_pressure || d.p_max > 0.0;
        }
        suite_runs.push_back(std::move(r));
    }
    const double elapsed = seconds_since(start);
    ok = worst_u <= 1.0 + kCeilingTol && worst_res <= kComplementarityTol && suite_runs.size() >= 10 &&
         min_steps >= 200 && max_steps <= 1000 && any_pressure && elapsed < 60.0;
    report(1, "ceiling + complementarity", ok,
           std::to_string(suite_runs.size()) + " scenarios, " + std::to_string(min_steps) + "-" +
               std::to_string(max_steps) + " steps, " + fmt("max u - 1 = %.2e, max residual %.2e", worst_u - 1.0, worst_res),
           elapsed);
}

// 2. PGS against active-set enumeration.
void criterion_oracle() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t nx = rng.index(1, 12);
        const std::size_t ny = rng.index(1, 12 / nx);
        const double hx = rng.uniform(0.05, 0.5);
        const double hy = hx * rng.uniform(0.5, 2.0);
        BoundarySpec spec;
        for (auto& tag : spec.sides) tag = rng.coin() ? D : N;
        spec.sides[rng.index(0, 3)] = D;
        const Grid grid = build_grid(nx, ny, {0.0, 0.0, nx * hx, ny * hy}, spec);
        LcpProblem lcp{std::make_shared<const LaplacianOperator>(assemble_laplacian(grid)), rng.uniform(1e-3, 1.0),
                       ScalarField(grid.cell_count())};
        for (auto& q : lcp.q) q = rng.uniform(-1.0, 1.0);
        const ScalarField exact = lcp_oracle_enumerate(lcp);
        const ScalarField p = lcp_solve_pgs(lcp).p;
        for (std::size_t k = 0; k < p.size(); ++k) worst = std::max(worst, std::abs(p[k] - exact[k]));
    }
    const double elapsed = seconds_since(start);
    report(2, "LCP oracle equivalence", worst <= kOracleTol && elapsed < 10.0,
           fmt("500 problems, max |p - p_oracle| = %.2e", worst), elapsed);
}

// 3. Comparison principle with ordered data and ordered frozen sources.
void criterion_comparison() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(3);
    double worst = 0.0;
    bool preconditions = true;
    bool pressure_active = false;
    for (int trial = 0; trial < 200; ++trial) {
        Scenario s = make("ordered", 16, walls_with_exit(Side::Right, rng.uniform(0.1, 0.4), rng.uniform(0.6, 0.9)),
                          RadialVelocity{{rng.uniform(1.1, 1.6), rng.uniform(0.2, 0.8)}, -rng.uniform(0.5, 2.0)},
                          ReactionSpec{}, constant(0.0), 0.1, 10);
        const std::size_t n = 256;
        std::vector<double> u1(n), u2(n);
        ScalarField f1(n), f2(n);
        for (std::size_t k = 0; k < n; ++k) {
            u1[k] = rng.uniform(0.0, 1.0);
            u2[k] = rng.uniform(u1[k], 1.0);
            f1[k] = rng.uniform(-1.0, 1.0);
            f2[k] = f1[k] + rng.uniform(0.0, 1.0);
        }
        s.initial = table(u1);
        const Problem p1 = make_problem(s);
        s.initial = table(u2);
        const Problem p2 = make_problem(s);
        RunOptions o1;
        o1.record_states = true;
        RunOptions o2 = o1;
        o1.frozen_source = [&f1](std::size_t, double) { return f1; };
        o2.frozen_source = [&f2](std::size_t, double) { return f2; };
        const Trajectory t1 = run(p1, o1);
        const Trajectory t2 = run(p2, o2);
        for (const auto& d : t2.diagnostics) pressure_active = pressure_active || d.p_max > 0.0;
        const OrderReport r = check_order(t1, t2, kOrderTol);
        preconditions = preconditions && r.precondition_ok;
        worst = std::max(worst, r.max_violation);
    }
    report(3, "discrete comparison principle", preconditions && worst <= kOrderTol && pressure_active,
           fmt("200 pairs on 16x16, max (u1 - u2)+ = %.2e", worst), seconds_since(start));
}

// 4. L1 contraction under the Gronwall envelope of R = alpha (2 + u_eq).
void criterion_contraction() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(4);
    bool ok = true;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = rng.uniform(0.2, 2.0);
        const double ueq = rng.uniform(0.1, 0.9);
        Scenario s = make("contraction", 16, walls_with_exit(Side::Right, 0.3, 0.7),
                          RadialVelocity{{1.3, 0.5}, -rng.uniform(0.5, 1.5)}, absorption(alpha, ueq), constant(0.0),
                          0.5, 50);
        std::vector<double> a(256), b(256);
        for (std::size_t k = 0; k < 256; ++k) {
            a[k] = rng.uniform(0.0, 1.0);
            b[k] = rng.uniform(0.0, 1.0);
        }
        s.initial = table(a);
        const Problem p1 = make_problem(s);
        s.initial = table(b);
        const Problem p2 = make_problem(s);
        const GrowthBound R = GrowthBound::constant(alpha * (2.0 + ueq));
        const ContractionReport r = compare_runs(p1.grid, run(p1), run(p2), R);
        ok = ok && r.passed;
        worst_ratio = std::max(worst_ratio, r.worst_ratio);
    }
    ok = ok && worst_ratio <= 1.0 + kGronwallSlack;
    report(4, "L1 Gronwall contraction", ok, fmt("50 pairs, max distance / envelope = %.4f", worst_ratio),
           seconds_since(start));
}

bool bitwise_equal(const Trajectory& a, const Trajectory& b) {
    if (a.snapshots.size() != b.snapshots.size() || a.step_count() != b.step_count()) return false;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k)
        if (a.snapshots[k].u != b.snapshots[k].u || a.snapshots[k].t != b.snapshots[k].t) return false;
    for (std::size_t k = 0; k < a.step_count(); ++k)
        if (a.diagnostics[k].mass != b.diagnostics[k].mass) return false;
    return true;
}

// 5. G3 + G4 imply zero pressure and agreement with the pressure-free run.
void criterion_congestion_free() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Scenario> cases;
    cases.push_back(make("rest", 16, sides(D, N, D, N), ConstantVelocity{}, ReactionSpec{},
                         disk({0.5, 0.5}, 0.3, 1.0, 0.2), 1.0, 200));
    cases.push_back(make("stirred", 16, BoundarySpec::uniform(D), CellularVelocity{1.0, 2, 1}, ReactionSpec{},
                         disk({0.3, 0.6}, 0.25, 1.0, 0.5), 1.0, 200));
    cases.push_back(make("expanding-decay", 16, sides(D, D, N, N), AffineVelocity{0.5, 0.0, 0.0, 0.0, {-0.25, 0.0}},
                         tabulated({-1.0, 1.0}, {1.0, -1.0}), disk({0.5, 0.5}, 0.3, 1.0, 0.6), 1.0, 200));
    {
        ReactionSpec source;
        source.type = "constant";
        source.value = 0.5;
        cases.push_back(make("balanced-source", 16, sides(D, D, N, N),
                             AffineVelocity{0.5, 0.0, 0.0, 0.0, {0.0, 0.0}}, source, constant(0.9), 1.0, 200));
    }
    {
        Scenario two = make("expanding-two-phase", 16, sides(D, D, N, N),
                            AffineVelocity{0.5, 0.0, 0.0, 0.0, {-0.25, 0.0}}, tabulated({-1.0, 1.0}, {1.0, -1.0}),
                            constant(0.0), 1.0, 200);
        std::vector<double> u0(256);
        Rng rng(5);
        for (auto& v : u0) v = rng.uniform(-1.0, 1.0);
        two.initial = table(u0);
        two.mode = Phase::Two;
        cases.push_back(two);
    }
    cases.push_back(make("stirred-relaxation", 16, BoundarySpec::uniform(D), CellularVelocity{1.5, 1, 2},
                         tabulated({-1.0, 1.0}, {0.9, -0.7}), disk({0.5, 0.5}, 0.35, 1.0, 0.1), 1.0, 200));

    bool ok = true;
    std::size_t qualified = 0;
    double worst_p = 0.0;
    std::string failed;
    for (const Scenario& sc : cases) {
        const Problem problem = make_problem(sc);
        const auto cond = check_congestion_free(problem.term, problem.divergence, {0.0, sc.time.horizon});
        if (!cond.g3.passed || !cond.g4.passed) {
            ok = false;
            failed += " " + sc.name + "(G3/G4)";
            continue;
        }
        ++qualified;
        const Trajectory with = run(problem);
        Problem free = problem;
        free.settings.pressure = false;
        const Trajectory without = run(free);
        double p_max = 0.0;
        for (const auto& d : with.diagnostics) p_max = std::max(p_max, d.p_max);
        worst_p = std::max(worst_p, p_max);
        if (p_max > kPressureZeroTol || !bitwise_equal(with, without)) {
            ok = false;
            failed += " " + sc.name;
        }
    }
    ok = ok && qualified >= 5;
    report(5, "congestion-free reduction", ok,
           std::to_string(qualified) + " scenarios, " + fmt("max |p| = %.2e, bitwise match", worst_p) +
               (failed.empty() ? "" : ", failed:" + failed),
           seconds_since(start));
}

// 6. Divergence-free V with absorption keeps p = 0; a strong sink activates p.
void criterion_absorption_example() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(6);
    bool ok = true;
    double worst_p = 0.0;
    double u_lo = 1.0;
    double u_hi = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> u0(24 * 24);
        for (auto& v : u0) v = rng.uniform(0.0, 1.0);
        const Scenario s = make("cellular-absorption", 24, BoundarySpec::uniform(D),
                                CellularVelocity{rng.uniform(0.5, 2.0), static_cast<int>(rng.index(1, 3)), 1},
                                absorption(1.0, 0.5), table(u0), 1.0, 200);
        const Problem problem = make_problem(s);
        const auto cond = check_congestion_free(problem.term, problem.divergence, {0.0, 1.0});
        ok = ok && cond.compressibility && cond.compressibility->passed;
        for (const auto& d : run(problem).diagnostics) {
            worst_p = std::max(worst_p, d.p_max);
            u_lo = std::min(u_lo, d.u_min);
            u_hi = std::max(u_hi, d.u_max);
        }
    }
    ok = ok && worst_p <= kPressureZeroTol && u_lo >= -kCeilingTol && u_hi <= 1.0 + kCeilingTol;

    const Problem sink = make_problem(doorway(16, 200));
    const auto cond = check_congestion_free(sink.term, sink.divergence, {0.0, 1.0});
    const bool violated = cond.compressibility && !cond.compressibility->passed;
    double sink_p = 0.0;
    for (const auto& d : run(sink).diagnostics) sink_p = std::max(sink_p, d.p_max);
    ok = ok && violated && sink_p > kPressureZeroTol;
    report(6, "absorption example", ok,
           fmt("max |p| = %.2e with u in [%.3f, %.3f]", worst_p, u_lo, u_hi) +
               fmt("; violated sink max p = %.3e", sink_p),
           seconds_since(start));
}

// 7. Envelope bound: logistic agreement O(dt) and u <= min(1, omega_2) in general.
void criterion_envelope() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<double> errors;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        Scenario s = make("logistic", 16, sides(D, N, D, N), ConstantVelocity{}, absorption(1.0, 0.5), constant(0.9),
                          2.0, 1);
        s.time.dt_max = dt;
        const Problem problem = make_problem(s);
        RunOptions opts;
        opts.record_states = true;
        const Trajectory traj = run(problem, opts);
        const Envelope env =
            integrate_envelope(problem.grid, problem.divergence, problem.term, 0.9, 0.9, 2.0, dt / 20.0);
        double err = 0.0;
        for (std::size_t k = 0; k < traj.states.size(); ++k)
            for (double v : traj.states[k]) err = std::max(err, std::abs(v - env.upper_at(traj.state_times[k])));
        errors.push_back(err);
        ok = ok && err <= kEnvelopeDtFactor * dt;
    }
    // Halving dt should roughly halve the error.
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double ratio = errors[k - 1] / errors[k];
        ok = ok && ratio > 1.6 && ratio < 2.4;
    }

    double worst_excess = 0.0;
    std::vector<Scenario> general{doorway(16, 200),
                                  make("stirred", 24, BoundarySpec::uniform(D), CellularVelocity{1.0, 1, 1},
                                       absorption(1.0, 0.3), disk({0.5, 0.5}, 0.3, 0.9, 0.2), 1.0, 200)};
    for (const Scenario& sc : general) {
        const Problem problem = make_problem(sc);
        RunOptions opts;
        opts.record_states = true;
        const Trajectory traj = run(problem, opts);
        const auto [lo, hi] = std::minmax_element(problem.u0.begin(), problem.u0.end());
        const Envelope env =
            integrate_envelope(problem.grid, problem.divergence, problem.term, *hi, *lo, sc.time.horizon, 1e-3);
        const double allowance =
            discretization_allowance(kAllowanceConstant, problem.base_dt(), problem.grid.hx());
        const EnvelopeBoundReport r = verify_envelope_bound(traj, env, allowance);
        worst_excess = std::max({worst_excess, r.upper_excess, r.lower_excess});
        ok = ok && r.passed;
    }
    report(7, "envelope bound", ok,
           fmt("logistic errors %.2e, %.2e, %.2e", errors[0], errors[1], errors[2]) +
               fmt("; general excess %.2e", worst_excess),
           seconds_since(start));
}

// 8. Picard gaps decay factorially and converge to the direct run.
void criterion_picard() {
    const auto start = std::chrono::steady_clock::now();
    // L_g T = 0.2 (2 + 0.5) * 1 = 0.5
    const Scenario s = make("picard", 16, walls_with_exit(Side::Right, 0.3, 0.7), RadialVelocity{{1.3, 0.5}, -1.0},
                            absorption(0.2, 0.5), disk({0.4, 0.5}, 0.3, 1.0, 0.3), 1.0, 200);
    const Problem problem = make_problem(s);
    const double LT = problem.term.lipschitz() * s.time.horizon;
    const PicardResult pr = picard_global(problem, 12);
    const auto& d = pr.gaps;

    bool ok = std::abs(LT - 0.5) <= 1e-12 && d[0] > 0.0;
    double worst_ratio = 0.0;
    double bound = LT;
    for (std::size_t n = 1; n < d.size(); ++n) {
        if (n > 1) bound *= LT / static_cast<double>(n - 1);
        // d_{n+1} <= (L T)^n / (n-1)! d_1
        ok = ok && d[n] <= bound * d[0] * (1.0 + 1e-9) + 1e-15;
        if (d[n - 1] > 1e-13) {
            worst_ratio = std::max(worst_ratio, d[n] / d[n - 1]);
            ok = ok && d[n] / d[n - 1] <= kPicardRatioCap;
        }
    }
    const double decay = d[5] / d[0];
    ok = ok && decay <= kPicardDecay;

    RunOptions opts;
    opts.record_states = true;
    const Trajectory direct = run(problem, opts);
    double dist = 0.0;
    for (std::size_t k = 0; k < direct.states.size(); ++k)
        dist = std::max(dist, l1_distance(problem.grid, direct.states[k], pr.last.states[k]));
    ok = ok && dist <= 10.0 * s.solver.tol;
    report(8, "Picard factorial decay", ok,
           fmt("max ratio %.3f, d6/d1 = %.2e, limit distance %.2e", worst_ratio, decay, dist), seconds_since(start));
}

// 9. u_eq ordering with V = 0 on both sides, and constant u_eq under a divergence-free field.
void criterion_ueq_ordering() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(9);
    bool ok = true;
    double worst = 0.0;
    std::size_t checked = 0;
    for (int trial = 0; trial < 4; ++trial) {
        const double ueq = rng.uniform(0.2, 0.8);
        const bool below = trial % 2 == 0;
        std::vector<double> u0(256);
        for (auto& v : u0) v = below ? rng.uniform(0.0, ueq) : rng.uniform(ueq, 1.0);
        const Scenario s = make("ueq", 16, sides(D, N, D, N), ConstantVelocity{}, absorption(rng.uniform(0.5, 3.0), ueq),
                                table(u0), 1.0, 200);
        const Problem problem = make_problem(s);
        RunOptions opts;
        opts.record_states = true;
        const auto r = check_ueq_ordering(problem, run(problem, opts),
                                          discretization_allowance(kAllowanceConstant, problem.base_dt(), problem.grid.hx()));
        ok = ok && r.passed && r.direction == (below ? UeqDirection::Below : UeqDirection::Above);
        worst = std::max(worst, r.max_violation);
        ++checked;
    }
    {
        const Scenario s = make("ueq-stirred", 24, BoundarySpec::uniform(D), CellularVelocity{1.0, 1, 1},
                                absorption(1.0, 0.6), disk({0.5, 0.5}, 0.3, 0.5, 0.1), 1.0, 200);
        const Problem problem = make_problem(s);
        RunOptions opts;
        opts.record_states = true;
        const auto r = check_ueq_ordering(problem, run(problem, opts),
                                          discretization_allowance(kAllowanceConstant, problem.base_dt(), problem.grid.hx()));
        ok = ok && r.passed && r.direction == UeqDirection::Below;
        worst = std::max(worst, r.max_violation);
        ++checked;
    }
    report(9, "u_eq ordering", ok, std::to_string(checked) + " runs, " + fmt("max violation %.2e", worst),
           seconds_since(start));
}

// 10. Mass ledger on every suite scenario.
void criterion_ledger() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = !suite_runs.empty();
    double worst_scaled = 0.0;
    for (const auto& r : suite_runs) {
        const double defect = mass_ledger_defect(r.traj);
        worst_scaled = std::max(worst_scaled, defect / static_cast<double>(r.cells));
        ok = ok && defect <= kLedgerTolPerCell * static_cast<double>(r.cells);
    }
    report(10, "mass ledger", ok,
           std::to_string(suite_runs.size()) + " scenarios, " + fmt("max defect / cells = %.2e", worst_scaled),
           seconds_since(start));
}

// 11. Total pressure energy under refinement.
void criterion_energy() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> energy;
    for (std::size_t n : {16, 32, 64}) {
        Scenario s = doorway(n, 1);
        s.time.dt_max = 0.0;
        double total = 0.0;
        for (const auto& d : run(s).diagnostics) total += d.pressure_energy;
        energy.push_back(total);
    }
    bool ok = energy[0] > 0.0;
    for (std::size_t k = 1; k < energy.size(); ++k) {
        const double ratio = energy[k] / energy[k - 1];
        ok = ok && ratio <= kEnergyFactor && ratio >= 1.0 / kEnergyFactor;
    }
    report(11, "pressure energy stability", ok,
           fmt("energies %.4g, %.4g, %.4g", energy[0], energy[1], energy[2]), seconds_since(start));
}

void guarded(const std::function<void()>& body, int id, const std::string& name) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("error: ") + e.what(), 0.0);
    }
}

}  // namespace

int main() {
    guarded(criterion_ceiling, 1, "ceiling + complementarity");
    guarded(criterion_oracle, 2, "LCP oracle equivalence");
    guarded(criterion_comparison, 3, "discrete comparison principle");
    guarded(criterion_contraction, 4, "L1 Gronwall contraction");
    guarded(criterion_congestion_free, 5, "congestion-free reduction");
    guarded(criterion_absorption_example, 6, "absorption example");
    guarded(criterion_envelope, 7, "envelope bound");
    guarded(criterion_picard, 8, "Picard factorial decay");
    guarded(criterion_ueq_ordering, 9, "u_eq ordering");
    guarded(criterion_ledger, 10, "mass ledger");
    guarded(criterion_energy, 11, "pressure energy stability");
    std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
