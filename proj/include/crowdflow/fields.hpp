#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "crowdflow/grid.hpp"

namespace crowdflow {

/// V = value everywhere.
struct ConstantVelocity {
    Vec2 value;
    friend bool operator==(const ConstantVelocity&, const ConstantVelocity&) = default;
};

/// V = speed * (x - center) / |x - center|. Negative speed is a sink towards
/// the center, positive a source.
struct RadialVelocity {
    Vec2 center;
    double speed = -1.0;
    friend bool operator==(const RadialVelocity&, const RadialVelocity&) = default;
};

/// V = (axx x + axy y + bx, ayx x + ayy y + by).
struct AffineVelocity {
    double axx = 0.0, axy = 0.0, ayx = 0.0, ayy = 0.0;
    Vec2 offset;
    friend bool operator==(const AffineVelocity&, const AffineVelocity&) = default;
};

/// Divergence-free vortex array from the stream function
/// psi = amplitude * sin(modes_x pi xi) sin(modes_y pi eta) / pi, with (xi, eta)
/// the coordinates scaled to the unit square. Face values are psi differences
/// across the face, so the discrete divergence vanishes cell by cell and the
/// normal velocity vanishes on the whole boundary.
struct CellularVelocity {
    double amplitude = 1.0;
    int modes_x = 1;
    int modes_y = 1;
    friend bool operator==(const CellularVelocity&, const CellularVelocity&) = default;
};

/// Precomputed V.nu per face, in the grid's face orientation.
struct FaceTableVelocity {
    std::vector<double> values;
    friend bool operator==(const FaceTableVelocity&, const FaceTableVelocity&) = default;
};

using VelocityDef =
    std::variant<ConstantVelocity, RadialVelocity, AffineVelocity, CellularVelocity, FaceTableVelocity>;

/// Catalog name of a velocity definition ("constant", "radial", ...).
std::string velocity_name(const VelocityDef& def);

/// Samples V.nu at every face center. With `force_neumann_walls`, Neumann
/// faces are overwritten with exactly 0 after sampling. Throws FieldError on
/// non-finite values.
FaceField sample_face_velocity(const Grid& grid, const VelocityDef& def, bool force_neumann_walls = true);

/// Discrete divergence per cell: (1/|K|) sum_f (V.nu_f) A_f with outward signs.
ScalarField divergence_of_velocity(const Grid& grid, const FaceField& face_velocity);

struct AdmissibilityReport {
    double min_dirichlet = 0.0;   ///< min of V.nu over Dirichlet faces
    double max_neumann = 0.0;     ///< max of |V.nu| over Neumann faces
    bool dirichlet_ok = true;     ///< outflow-or-tangent on Dirichlet faces
    bool neumann_ok = true;       ///< no normal flow on Neumann faces
    std::vector<std::size_t> offending_faces;

    bool passed() const noexcept { return dirichlet_ok && neumann_ok; }
};

/// Checks V.nu >= -tol on Dirichlet faces and |V.nu| <= tol on Neumann faces.
AdmissibilityReport check_velocity_admissibility(const Grid& grid, const FaceField& face_velocity,
                                                 double tol = 1e-12);

}  // namespace crowdflow
