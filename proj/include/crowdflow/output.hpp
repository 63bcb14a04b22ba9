#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "crowdflow/stepper.hpp"

namespace crowdflow {

inline constexpr const char* kDiagnosticsHeader =
    "step,t,mass,adv_outflux_D,pressure_outflux_D,reaction_integral,p_max,comp_residual,pressure_energy";

/// VTK legacy ASCII structured points with cell data u and p.
std::string snapshot_to_vtk(const Grid& grid, const Snapshot& snapshot, const std::string& title);

/// Diagnostics CSV, one row per step, under kDiagnosticsHeader.
std::string diagnostics_to_csv(const std::vector<StepDiagnostics>& diagnostics);

/// Metadata document: the scenario echo under `scenario`, grid geometry,
/// versions and run totals.
std::string run_metadata(const Scenario& scenario, const Grid& grid, const Trajectory& trajectory);

/// Writes snapshot_NNNN.vtk per snapshot, diagnostics.csv when there are
/// steps, and metadata.yaml into out_dir (created if missing). Returns the
/// written paths. Filesystem failures propagate as std::filesystem errors.
std::vector<std::filesystem::path> write_outputs(const Trajectory& trajectory, const Scenario& scenario,
                                                 const Grid& grid, const std::filesystem::path& out_dir);

}  // namespace crowdflow
