#include "crowdflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace crowdflow {

double mass_ledger_defect(const Trajectory& trajectory) {
    double previous = trajectory.initial_mass;
    double worst = 0.0;
    for (const auto& d : trajectory.diagnostics) {
        const double expected = d.reaction_integral - d.adv_outflux_D - d.pressure_outflux_D;
        worst = std::max(worst, std::abs(d.mass - previous - expected));
        previous = d.mass;
    }
    return worst;
}

ContractionReport compare_runs(const Grid& grid, const Trajectory& first, const Trajectory& second,
                               const GrowthBound& growth, double allowance) {
    if (first.snapshots.size() != second.snapshots.size()) throw Error("compare_runs: snapshot counts differ");
    ContractionReport report;
    if (first.snapshots.empty()) return report;
    const double d0 = l1_distance(grid, first.snapshots.front().u, second.snapshots.front().u);
    for (std::size_t k = 0; k < first.snapshots.size(); ++k) {
        const Snapshot& a = first.snapshots[k];
        const Snapshot& b = second.snapshots[k];
        if (a.t != b.t || a.u.size() != b.u.size()) throw Error("compare_runs: mismatched discretization");
        const double dist = l1_distance(grid, a.u, b.u);
        const double env = std::exp(growth.integral(a.t)) * d0;
        report.times.push_back(a.t);
        report.distances.push_back(dist);
        report.envelopes.push_back(env);
        if (env > 0.0) report.worst_ratio = std::max(report.worst_ratio, dist / env);
        if (dist > env * (1.0 + 5e-3) + allowance) report.passed = false;
    }
    return report;
}

OrderReport check_order(const Trajectory& first, const Trajectory& second, double tol) {
    OrderReport report;
    const bool use_states = !first.states.empty() && !second.states.empty();
    std::vector<const ScalarField*> a;
    std::vector<const ScalarField*> b;
    if (use_states) {
        if (first.states.size() != second.states.size()) throw Error("check_order: step sequences differ");
        for (std::size_t k = 0; k < first.states.size(); ++k) {
            a.push_back(&first.states[k]);
            b.push_back(&second.states[k]);
        }
    } else {
        if (first.snapshots.size() != second.snapshots.size()) throw Error("check_order: snapshot counts differ");
        for (std::size_t k = 0; k < first.snapshots.size(); ++k) {
            a.push_back(&first.snapshots[k].u);
            b.push_back(&second.snapshots[k].u);
        }
    }
    if (a.empty()) return report;
    const ScalarField& u1 = *a.front();
    const ScalarField& u2 = *b.front();
    for (std::size_t k = 0; k < u1.size(); ++k) {
        if (u1[k] > u2[k]) {
            report.precondition_ok = false;
            report.witness_cell = k;
            report.passed = false;
            return report;
        }
    }
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t k = 0; k < a[s]->size(); ++k)
            report.max_violation = std::max(report.max_violation, (*a[s])[k] - (*b[s])[k]);
    report.passed = report.max_violation <= tol;
    return report;
}

ScalarField ueq_flux_divergence(const Grid& grid, const FaceField& face_velocity, const AbsorptionParams& params) {
    FaceField weighted(grid.face_count());
    for (std::size_t fi = 0; fi < grid.face_count(); ++fi) {
        const Face& f = grid.face(fi);
        const double ueq = f.kind == FaceKind::Interior
                               ? 0.5 * (params.u_eq_at(f.owner) + params.u_eq_at(f.neighbor))
                               : params.u_eq_at(f.owner);
        weighted[fi] = ueq * face_velocity[fi];
    }
    return divergence_of_velocity(grid, weighted);
}

UeqOrderingReport qualify_ueq_ordering(const Problem& problem, double tol) {
    UeqOrderingReport report;
    const AbsorptionParams* params = problem.term.absorption_params();
    if (!params) {
        report.skipped = true;
        return report;
    }
    const ScalarField div = ueq_flux_divergence(problem.grid, problem.face_velocity, *params);
    bool below = true;
    bool above = true;
    for (std::size_t k = 0; k < div.size(); ++k) {
        const double ueq = params->u_eq_at(k);
        if (div[k] < -tol || problem.u0[k] > ueq) below = false;
        if (div[k] > tol || problem.u0[k] < ueq) above = false;
    }
    if (below) {
        report.direction = UeqDirection::Below;
    } else if (above) {
        report.direction = UeqDirection::Above;
    } else {
        report.skipped = true;
        for (std::size_t k = 0; k < div.size(); ++k) {
            const double ueq = params->u_eq_at(k);
            const bool ok_below = div[k] >= -tol && problem.u0[k] <= ueq;
            const bool ok_above = div[k] <= tol && problem.u0[k] >= ueq;
            if (!ok_below && !ok_above) report.witness_cells.push_back(k);
        }
        if (report.witness_cells.empty()) report.witness_cells.push_back(0);
    }
    return report;
}

UeqOrderingReport check_ueq_ordering(const Problem& problem, const Trajectory& trajectory, double allowance,
                                     double tol) {
    UeqOrderingReport report = qualify_ueq_ordering(problem, tol);
    report.allowance = allowance;
    if (report.skipped) return report;
    const AbsorptionParams& params = *problem.term.absorption_params();
    auto scan = [&](const ScalarField& u) {
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double gap = u[k] - params.u_eq_at(k);
            report.max_violation =
                std::max(report.max_violation, report.direction == UeqDirection::Below ? gap : -gap);
            report.max_density = std::max(report.max_density, u[k]);
        }
    };
    for (const auto& snap : trajectory.snapshots) scan(snap.u);
    for (const auto& u : trajectory.states) scan(u);
    report.passed = report.max_violation <= allowance;
    if (report.direction == UeqDirection::Above) report.passed = report.passed && report.max_density <= 1.0 + 1e-9;
    return report;
}

namespace {

double sup_l1(const Grid& grid, const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.states.size() && k < b.states.size(); ++k)
        worst = std::max(worst, l1_distance(grid, a.states[k], b.states[k]));
    return worst;
}

}  // namespace

DependenceReport continuous_dependence_probe(const Problem& problem, const std::vector<Perturbation>& perturbations) {
    DependenceReport report;
    RunOptions opts;
    opts.record_states = true;
    const Trajectory base = run(problem, opts);
    const double T = problem.settings.horizon;
    const double gronwall = std::exp(problem.term.growth().max() * T);

    for (const auto& pert : perturbations) {
        Problem variant = problem;
        PerturbationOutcome out;
        out.perturbation = pert;
        if (pert.kind == PerturbationKind::Source) {
            variant.term = ReactionTerm::sum(problem.term, ReactionTerm::constant(pert.size));
            out.bound = std::abs(pert.size) * T * gronwall * problem.grid.domain_volume();
        } else {
            double& v = variant.u0[pert.cell];
            v = v + pert.size <= 1.0 ? v + pert.size : v - pert.size;
            out.bound = std::abs(pert.size) * problem.grid.cell_volume() * gronwall;
        }
        const Trajectory perturbed = run(variant, opts);
        out.deviation = sup_l1(problem.grid, base, perturbed);
        out.within_bound = out.deviation <= out.bound * (1.0 + 1e-9) + 1e-14;
        report.passed = report.passed && out.within_bound;
        report.outcomes.push_back(out);
    }

    std::map<PerturbationKind, std::vector<const PerturbationOutcome*>> by_kind;
    for (const auto& o : report.outcomes) by_kind[o.perturbation.kind].push_back(&o);
    for (auto& [kind, list] : by_kind) {
        std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) {
            return std::abs(a->perturbation.size) < std::abs(b->perturbation.size);
        });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (list[i]->deviation + 1e-14 < list[i - 1]->deviation) report.monotone = false;
    }
    report.passed = report.passed && report.monotone;
    return report;
}

}  // namespace crowdflow
