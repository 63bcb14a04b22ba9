#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "crowdflow/common.hpp"

namespace crowdflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

enum class FaceKind { Interior, Dirichlet, Neumann };
enum class BoundaryTag { Dirichlet, Neumann };
enum class Side { Left, Right, Bottom, Top };

std::string to_string(BoundaryTag tag);
std::string to_string(Side side);
BoundaryTag boundary_tag_from_string(const std::string& s);
Side side_from_string(const std::string& s);

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Extent {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 1.0;
    double ymax = 1.0;
    friend bool operator==(const Extent&, const Extent&) = default;
};

/// Re-tags the boundary faces of one side whose centers fall in [from, to]
/// (coordinate measured along the side).
struct BoundaryPatch {
    Side side = Side::Right;
    double from = 0.0;
    double to = 0.0;
    BoundaryTag tag = BoundaryTag::Dirichlet;
    friend bool operator==(const BoundaryPatch&, const BoundaryPatch&) = default;
};

/// Tag rule for every boundary face: a default per side, then patches applied
/// in order (later patches win).
struct BoundarySpec {
    std::array<BoundaryTag, 4> sides{BoundaryTag::Dirichlet, BoundaryTag::Dirichlet,
                                     BoundaryTag::Dirichlet, BoundaryTag::Dirichlet};
    std::vector<BoundaryPatch> patches;

    BoundaryTag side(Side s) const { return sides[static_cast<std::size_t>(s)]; }
    BoundaryTag& side(Side s) { return sides[static_cast<std::size_t>(s)]; }

    static BoundarySpec uniform(BoundaryTag tag) {
        BoundarySpec spec;
        spec.sides.fill(tag);
        return spec;
    }
    friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

inline constexpr std::size_t kNoCell = static_cast<std::size_t>(-1);

/// A face of the mesh. The normal points out of `owner`: towards `neighbor`
/// for interior faces (+x or +y), outward for boundary faces.
struct Face {
    std::size_t owner = kNoCell;
    std::size_t neighbor = kNoCell;
    Vec2 normal;
    Vec2 center;
    double area = 0.0;
    /// Distance from the owner center to the neighbor center, or to the face
    /// for boundary faces.
    double distance = 0.0;
    FaceKind kind = FaceKind::Interior;
    /// Boundary side for boundary faces; unspecified for interior faces.
    Side side = Side::Left;

    bool is_boundary() const noexcept { return kind != FaceKind::Interior; }
};

/// Incidence of a face on a cell: +1 when the face normal points out of the
/// cell, -1 otherwise.
struct CellFace {
    std::size_t face;
    double sign;
};

/// Uniform cell-centered Cartesian mesh. Cells are numbered row-major
/// (index = j * nx + i); faces are enumerated x-faces first, then y-faces,
/// both row-major. Immutable after construction.
class Grid {
public:
    Grid(std::size_t nx, std::size_t ny, const Extent& extent, const BoundarySpec& boundary);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    double hx() const noexcept { return hx_; }
    double hy() const noexcept { return hy_; }
    /// Largest cell size; used in O(h) allowances.
    double h() const noexcept { return hx_ > hy_ ? hx_ : hy_; }
    const Extent& extent() const noexcept { return extent_; }
    Vec2 origin() const noexcept { return {extent_.xmin, extent_.ymin}; }
    const BoundarySpec& boundary_spec() const noexcept { return boundary_; }

    std::size_t cell_count() const noexcept { return nx_ * ny_; }
    std::size_t face_count() const noexcept { return faces_.size(); }
    double cell_volume() const noexcept { return hx_ * hy_; }
    double domain_volume() const noexcept { return cell_volume() * static_cast<double>(cell_count()); }

    std::size_t cell_index(std::size_t i, std::size_t j) const noexcept { return j * nx_ + i; }
    Vec2 cell_center(std::size_t cell) const;

    const Face& face(std::size_t f) const { return faces_[f]; }
    const std::vector<Face>& faces() const noexcept { return faces_; }
    const std::vector<CellFace>& cell_faces(std::size_t cell) const { return cell_faces_[cell]; }

    std::size_t interior_face_count() const noexcept;
    std::size_t boundary_face_count(FaceKind kind) const noexcept;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.extent_ == b.extent_ && a.boundary_ == b.boundary_;
    }

private:
    std::size_t nx_;
    std::size_t ny_;
    Extent extent_;
    BoundarySpec boundary_;
    double hx_;
    double hy_;
    std::vector<Face> faces_;
    std::vector<std::vector<CellFace>> cell_faces_;
};

/// Builds a grid; throws ConfigError when no boundary face ends up Dirichlet.
Grid build_grid(std::size_t nx, std::size_t ny, const Extent& extent, const BoundarySpec& boundary);

/// Cell-wise sum of |K| * values.
double integrate(const Grid& grid, const ScalarField& values);

/// Cell-wise sum of |K| * |a - b|.
double l1_distance(const Grid& grid, const ScalarField& a, const ScalarField& b);

}  // namespace crowdflow
