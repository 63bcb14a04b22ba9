#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crowdflow/fields.hpp"
#include "crowdflow/reaction.hpp"

namespace crowdflow {

enum class Phase { One, Two };

std::string to_string(Phase phase);

/// Serializable description of a catalog reaction term.
///   zero; constant (value); absorption (alpha, u_eq; one value or one per
///   cell); tabulated (r, g knots); two_phase (parts = {positive, negative}).
/// `lipschitz` and `growth` override the catalog's declared constants.
struct ReactionSpec {
    std::string type = "zero";
    double value = 0.0;
    std::vector<double> alpha{1.0};
    std::vector<double> u_eq{0.5};
    std::vector<double> r;
    std::vector<double> g;
    std::vector<ReactionSpec> parts;
    std::optional<double> lipschitz;
    std::optional<GrowthBound> growth;

    friend bool operator==(const ReactionSpec&, const ReactionSpec&) = default;
};

ReactionTerm make_reaction(const ReactionSpec& spec, std::size_t cell_count);

/// Initial density: constant (value), table (values per cell, row-major),
/// box (value inside `box`, background elsewhere), disk (value within
/// `radius` of `center`, background elsewhere).
struct InitialSpec {
    std::string type = "constant";
    double value = 0.0;
    double background = 0.0;
    std::vector<double> values;
    Extent box;
    Vec2 center;
    double radius = 0.0;

    friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

ScalarField make_initial(const InitialSpec& spec, const Grid& grid);

struct TimeSpec {
    double horizon = 1.0;
    /// Cap on the step size; 0 means the monotonicity bound alone.
    double dt_max = 0.0;
    /// Snapshot spacing; 0 means snapshots at t = 0 and t = horizon only.
    double cadence = 0.0;

    friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

struct SolverSpec {
    double tol = 1e-10;
    /// 0 selects 100 * (cell count) + 1000.
    std::size_t max_sweeps = 0;
    double admissibility_tol = 1e-12;
    /// false disables the density projection (pure transport-reaction).
    bool pressure = true;
    /// Semismooth Newton start for the one-phase pressure solve; PGS still
    /// certifies the result.
    bool accelerate = true;

    friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

/// Everything needed to set up one simulation.
struct Scenario {
    std::string name = "scenario";
    std::size_t nx = 1;
    std::size_t ny = 1;
    Extent extent;
    BoundarySpec boundary;
    /// Overwrite sampled V.nu with 0 on Neumann faces.
    bool neumann_walls = true;
    VelocityDef velocity = ConstantVelocity{};
    ReactionSpec reaction;
    InitialSpec initial;
    TimeSpec time;
    SolverSpec solver;
    Phase mode = Phase::One;
    /// Skip the fail-fast velocity admissibility check.
    bool exploratory = false;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses a scenario from YAML text. A document with a top-level `scenario`
/// key (a run's metadata echo) is accepted too. Throws ParseError on syntax
/// errors, unknown keys or ill-typed values.
Scenario parse_scenario(const std::string& text);

/// Reads and parses a scenario file; the file grammar is documented in
/// docs/scenario-format.md.
Scenario load_scenario_file(const std::string& path);

/// Emits the scenario as YAML; parse_scenario(scenario_to_yaml(s)) == s.
std::string scenario_to_yaml(const Scenario& scenario);

}  // namespace crowdflow
