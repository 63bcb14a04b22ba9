#include "crowdflow/grid.hpp"

#include <cmath>

namespace crowdflow {

std::string to_string(BoundaryTag tag) {
    return tag == BoundaryTag::Dirichlet ? "dirichlet" : "neumann";
}

std::string to_string(Side side) {
    switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
    }
    return "left";
}

BoundaryTag boundary_tag_from_string(const std::string& s) {
    if (s == "dirichlet") return BoundaryTag::Dirichlet;
    if (s == "neumann") return BoundaryTag::Neumann;
    throw ConfigError("unknown boundary tag '" + s + "' (expected dirichlet or neumann)");
}

Side side_from_string(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    if (s == "bottom") return Side::Bottom;
    if (s == "top") return Side::Top;
    throw ConfigError("unknown side '" + s + "' (expected left, right, bottom or top)");
}

namespace {

BoundaryTag tag_for(const BoundarySpec& spec, Side side, double along) {
    BoundaryTag tag = spec.side(side);
    for (const auto& patch : spec.patches) {
        if (patch.side == side && along >= patch.from && along <= patch.to) tag = patch.tag;
    }
    return tag;
}

FaceKind kind_of(BoundaryTag tag) {
    return tag == BoundaryTag::Dirichlet ? FaceKind::Dirichlet : FaceKind::Neumann;
}

}  // namespace

Grid::Grid(std::size_t nx, std::size_t ny, const Extent& extent, const BoundarySpec& boundary)
    : nx_(nx), ny_(ny), extent_(extent), boundary_(boundary) {
    if (nx == 0 || ny == 0) throw ConfigError("grid needs nx, ny >= 1");
    const double lx = extent.xmax - extent.xmin;
    const double ly = extent.ymax - extent.ymin;
    if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("grid extent must have positive side lengths");
    hx_ = lx / static_cast<double>(nx);
    hy_ = ly / static_cast<double>(ny);

    faces_.reserve((nx + 1) * ny + nx * (ny + 1));
    cell_faces_.assign(nx * ny, {});

    auto add = [&](Face f) {
        const std::size_t id = faces_.size();
        cell_faces_[f.owner].push_back({id, 1.0});
        if (f.neighbor != kNoCell) cell_faces_[f.neighbor].push_back({id, -1.0});
        faces_.push_back(f);
    };

    // x-faces: vertical faces at x = xmin + i*hx, row-major over (j, i).
    for (std::size_t j = 0; j < ny; ++j) {
        const double yc = extent.ymin + (static_cast<double>(j) + 0.5) * hy_;
        for (std::size_t i = 0; i <= nx; ++i) {
            Face f;
            f.center = {extent.xmin + static_cast<double>(i) * hx_, yc};
            f.area = hy_;
            if (i == 0) {
                f.owner = cell_index(0, j);
                f.normal = {-1.0, 0.0};
                f.distance = 0.5 * hx_;
                f.side = Side::Left;
                f.kind = kind_of(tag_for(boundary, Side::Left, yc));
            } else if (i == nx) {
                f.owner = cell_index(nx - 1, j);
                f.normal = {1.0, 0.0};
                f.distance = 0.5 * hx_;
                f.side = Side::Right;
                f.kind = kind_of(tag_for(boundary, Side::Right, yc));
            } else {
                f.owner = cell_index(i - 1, j);
                f.neighbor = cell_index(i, j);
                f.normal = {1.0, 0.0};
                f.distance = hx_;
            }
            add(f);
        }
    }
    // y-faces: horizontal faces at y = ymin + j*hy, row-major over (j, i).
    for (std::size_t j = 0; j <= ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double xc = extent.xmin + (static_cast<double>(i) + 0.5) * hx_;
            Face f;
            f.center = {xc, extent.ymin + static_cast<double>(j) * hy_};
            f.area = hx_;
            if (j == 0) {
                f.owner = cell_index(i, 0);
                f.normal = {0.0, -1.0};
                f.distance = 0.5 * hy_;
                f.side = Side::Bottom;
                f.kind = kind_of(tag_for(boundary, Side::Bottom, xc));
            } else if (j == ny) {
                f.owner = cell_index(i, ny - 1);
                f.normal = {0.0, 1.0};
                f.distance = 0.5 * hy_;
                f.side = Side::Top;
                f.kind = kind_of(tag_for(boundary, Side::Top, xc));
            } else {
                f.owner = cell_index(i, j - 1);
                f.neighbor = cell_index(i, j);
                f.normal = {0.0, 1.0};
                f.distance = hy_;
            }
            add(f);
        }
    }

    if (boundary_face_count(FaceKind::Dirichlet) == 0)
        throw ConfigError("Γ_D must have positive measure: no boundary face is tagged Dirichlet");
}

Vec2 Grid::cell_center(std::size_t cell) const {
    const std::size_t i = cell % nx_;
    const std::size_t j = cell / nx_;
    return {extent_.xmin + (static_cast<double>(i) + 0.5) * hx_,
            extent_.ymin + (static_cast<double>(j) + 0.5) * hy_};
}

std::size_t Grid::interior_face_count() const noexcept {
    std::size_t n = 0;
    for (const auto& f : faces_) n += f.kind == FaceKind::Interior;
    return n;
}

std::size_t Grid::boundary_face_count(FaceKind kind) const noexcept {
    std::size_t n = 0;
    for (const auto& f : faces_) n += f.kind == kind;
    return n;
}

Grid build_grid(std::size_t nx, std::size_t ny, const Extent& extent, const BoundarySpec& boundary) {
    return Grid(nx, ny, extent, boundary);
}

double integrate(const Grid& grid, const ScalarField& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * grid.cell_volume();
}

double l1_distance(const Grid& grid, const ScalarField& a, const ScalarField& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(a[k] - b[k]);
    return sum * grid.cell_volume();
}

}  // namespace crowdflow
