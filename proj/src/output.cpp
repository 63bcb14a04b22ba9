#include "crowdflow/output.hpp"

#include <yaml-cpp/yaml.h>

#include <cerrno>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace crowdflow {

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (out) out << contents;
    if (!out) {
        throw std::filesystem::filesystem_error("cannot write output file", path,
                                                std::error_code(errno ? errno : EIO, std::generic_category()));
    }
}

void write_cells(std::ostringstream& os, const char* name, const ScalarField& values, std::size_t n) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < n; ++k) os << format_number(k < values.size() ? values[k] : 0.0) << '\n';
}

}  // namespace

std::string snapshot_to_vtk(const Grid& grid, const Snapshot& snapshot, const std::string& title) {
    std::ostringstream os;
    const std::size_t n = grid.cell_count();
    os << "# vtk DataFile Version 3.0\n";
    os << title << " t=" << format_number(snapshot.t) << '\n';
    os << "ASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << grid.nx() + 1 << ' ' << grid.ny() + 1 << " 1\n";
    os << "ORIGIN " << format_number(grid.origin().x) << ' ' << format_number(grid.origin().y) << " 0\n";
    os << "SPACING " << format_number(grid.hx()) << ' ' << format_number(grid.hy()) << " 1\n";
    os << "CELL_DATA " << n << '\n';
    write_cells(os, "u", snapshot.u, n);
    write_cells(os, "p", snapshot.p, n);
    return os.str();
}

std::string diagnostics_to_csv(const std::vector<StepDiagnostics>& diagnostics) {
    std::ostringstream os;
    os << kDiagnosticsHeader << '\n';
    for (const auto& d : diagnostics) {
        os << d.step << ',' << format_number(d.t) << ',' << format_number(d.mass) << ','
           << format_number(d.adv_outflux_D) << ',' << format_number(d.pressure_outflux_D) << ','
           << format_number(d.reaction_integral) << ',' << format_number(d.p_max) << ','
           << format_number(d.comp_residual) << ',' << format_number(d.pressure_energy) << '\n';
    }
    return os.str();
}

std::string run_metadata(const Scenario& scenario, const Grid& grid, const Trajectory& trajectory) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "scenario" << YAML::Value << YAML::Load(scenario_to_yaml(scenario));

    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "nx" << YAML::Value << grid.nx();
    out << YAML::Key << "ny" << YAML::Value << grid.ny();
    out << YAML::Key << "hx" << YAML::Value << format_number(grid.hx());
    out << YAML::Key << "hy" << YAML::Value << format_number(grid.hy());
    out << YAML::Key << "cells" << YAML::Value << grid.cell_count();
    out << YAML::Key << "faces" << YAML::Value << grid.face_count();
    out << YAML::Key << "dirichlet_faces" << YAML::Value << grid.boundary_face_count(FaceKind::Dirichlet);
    out << YAML::Key << "neumann_faces" << YAML::Value << grid.boundary_face_count(FaceKind::Neumann);
    out << YAML::EndMap;

    out << YAML::Key << "versions" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "crowdflow" << YAML::Value << kVersion;
    out << YAML::Key << "compiler" << YAML::Value << __VERSION__;
    out << YAML::Key << "cplusplus" << YAML::Value << static_cast<long>(__cplusplus);
    out << YAML::EndMap;

    out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "steps" << YAML::Value << trajectory.step_count();
    out << YAML::Key << "snapshots" << YAML::Value << trajectory.snapshots.size();
    out << YAML::Key << "initial_mass" << YAML::Value << format_number(trajectory.initial_mass);
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const Trajectory& trajectory, const Scenario& scenario,
                                                 const Grid& grid, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.vtk", k);
        const auto path = out_dir / name;
        write_file(path, snapshot_to_vtk(grid, trajectory.snapshots[k], scenario.name));
        written.push_back(path);
    }
    if (!trajectory.diagnostics.empty()) {
        const auto path = out_dir / "diagnostics.csv";
        write_file(path, diagnostics_to_csv(trajectory.diagnostics));
        written.push_back(path);
    }
    const auto meta = out_dir / "metadata.yaml";
    write_file(meta, run_metadata(scenario, grid, trajectory));
    written.push_back(meta);
    return written;
}

}  // namespace crowdflow
