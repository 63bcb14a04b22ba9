#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crowdflow/stepper.hpp"

namespace crowdflow {

/// Largest per-step mismatch of the mass ledger
///   mass_k - mass_{k-1} - (reaction_k - adv_outflux_k - pressure_outflux_k).
double mass_ledger_defect(const Trajectory& trajectory);

struct ContractionReport {
    std::vector<double> times;
    std::vector<double> distances;  ///< ||u_1(t) - u_2(t)||_1
    std::vector<double> envelopes;  ///< exp(int_0^t R) ||u_1(0) - u_2(0)||_1
    double worst_ratio = 0.0;       ///< max distance / envelope over snapshots with envelope > 0
    bool passed = true;
};

/// L1 distance of two runs on the same grid and time grid against the
/// Gronwall envelope of the growth bound R. Passes when every distance is at
/// most envelope * (1 + 5e-3) + allowance. Throws Error on mismatched
/// discretizations.
ContractionReport compare_runs(const Grid& grid, const Trajectory& first, const Trajectory& second,
                               const GrowthBound& growth, double allowance = 0.0);

struct OrderReport {
    bool precondition_ok = true;
    std::size_t witness_cell = 0;   ///< where u_1(0) > u_2(0) when rejected
    double max_violation = 0.0;     ///< max (u_1 - u_2)^+ over steps and cells
    bool passed = true;
};

/// Checks u_1 <= u_2 on every recorded state (snapshots when states are not
/// recorded). Rejects crossed initial data with a witness cell.
OrderReport check_order(const Trajectory& first, const Trajectory& second, double tol = 1e-9);

/// Discrete div(u_eq V), using the arithmetic mean of u_eq on interior faces
/// and the owner value on boundary faces.
ScalarField ueq_flux_divergence(const Grid& grid, const FaceField& face_velocity, const AbsorptionParams& params);

enum class UeqDirection { None, Below, Above };

struct UeqOrderingReport {
    UeqDirection direction = UeqDirection::None;
    /// Cells where neither hypothesis sign holds (or the initial ordering fails).
    std::vector<std::size_t> witness_cells;
    double max_violation = 0.0;  ///< max (u - u_eq)^+ (Below) or (u_eq - u)^+ (Above)
    double max_density = 0.0;
    double allowance = 0.0;
    bool skipped = false;
    bool passed = false;
};

/// Which ordering the absorption hypothesis qualifies for the problem's data.
UeqOrderingReport qualify_ueq_ordering(const Problem& problem, double tol = 1e-12);

/// Qualifies, then checks the trajectory stays on its side of u_eq within
/// `allowance` (and below 1 + 1e-9 in the Above case).
UeqOrderingReport check_ueq_ordering(const Problem& problem, const Trajectory& trajectory, double allowance,
                                     double tol = 1e-12);

enum class PerturbationKind { Source, InitialCell };

struct Perturbation {
    PerturbationKind kind = PerturbationKind::Source;
    double size = 0.0;       ///< epsilon
    std::size_t cell = 0;    ///< for InitialCell
};

struct PerturbationOutcome {
    Perturbation perturbation;
    double deviation = 0.0;  ///< sup_t ||u_eps(t) - u(t)||_1
    double bound = 0.0;      ///< Gronwall envelope for this perturbation
    bool within_bound = true;
};

struct DependenceReport {
    std::vector<PerturbationOutcome> outcomes;
    /// Deviations shrink with the perturbation size within each kind.
    bool monotone = true;
    bool passed = true;
};

/// Runs the base problem and each perturbation (source g + eps, or u0 raised
/// by eps on one cell) and compares sup-in-time L1 deviations with
/// eps T e^{RT} |Omega| and eps |K| e^{RT}.
DependenceReport continuous_dependence_probe(const Problem& problem, const std::vector<Perturbation>& perturbations);

}  // namespace crowdflow
