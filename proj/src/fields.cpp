#include "crowdflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace crowdflow {

std::string velocity_name(const VelocityDef& def) {
    struct Visitor {
        std::string operator()(const ConstantVelocity&) const { return "constant"; }
        std::string operator()(const RadialVelocity&) const { return "radial"; }
        std::string operator()(const AffineVelocity&) const { return "affine"; }
        std::string operator()(const CellularVelocity&) const { return "cellular"; }
        std::string operator()(const FaceTableVelocity&) const { return "table"; }
    };
    return std::visit(Visitor{}, def);
}

namespace {

double stream_function(const Grid& grid, const CellularVelocity& c, Vec2 x) {
    const auto& e = grid.extent();
    const double xi = (x.x - e.xmin) / (e.xmax - e.xmin);
    const double eta = (x.y - e.ymin) / (e.ymax - e.ymin);
    const double pi = std::numbers::pi;
    return c.amplitude * std::sin(c.modes_x * pi * xi) * std::sin(c.modes_y * pi * eta) / pi;
}

double cellular_flux(const Grid& grid, const CellularVelocity& c, const Face& f) {
    // Flux through the face along +x (or +y), from stream-function differences.
    double along;
    if (f.normal.x != 0.0) {
        const Vec2 a{f.center.x, f.center.y - 0.5 * f.area};
        const Vec2 b{f.center.x, f.center.y + 0.5 * f.area};
        along = (stream_function(grid, c, b) - stream_function(grid, c, a)) / f.area;
        return f.normal.x > 0.0 ? along : -along;
    }
    const Vec2 a{f.center.x - 0.5 * f.area, f.center.y};
    const Vec2 b{f.center.x + 0.5 * f.area, f.center.y};
    along = -(stream_function(grid, c, b) - stream_function(grid, c, a)) / f.area;
    return f.normal.y > 0.0 ? along : -along;
}

Vec2 evaluate_point(const VelocityDef& def, Vec2 x) {
    if (const auto* c = std::get_if<ConstantVelocity>(&def)) return c->value;
    if (const auto* r = std::get_if<RadialVelocity>(&def)) {
        const Vec2 d = x - r->center;
        const double n = std::hypot(d.x, d.y);
        if (n == 0.0) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
        return (r->speed / n) * d;
    }
    const auto& a = std::get<AffineVelocity>(def);
    return {a.axx * x.x + a.axy * x.y + a.offset.x, a.ayx * x.x + a.ayy * x.y + a.offset.y};
}

}  // namespace

FaceField sample_face_velocity(const Grid& grid, const VelocityDef& def, bool force_neumann_walls) {
    FaceField out(grid.face_count());
    if (const auto* table = std::get_if<FaceTableVelocity>(&def)) {
        if (table->values.size() != grid.face_count()) {
            std::ostringstream os;
            os << "velocity table has " << table->values.size() << " entries, grid has " << grid.face_count()
               << " faces";
            throw FieldError(os.str());
        }
    }
    for (std::size_t fi = 0; fi < grid.face_count(); ++fi) {
        const Face& f = grid.face(fi);
        double value;
        if (const auto* table = std::get_if<FaceTableVelocity>(&def)) {
            value = table->values[fi];
        } else if (const auto* cell = std::get_if<CellularVelocity>(&def)) {
            value = cellular_flux(grid, *cell, f);
        } else {
            value = dot(evaluate_point(def, f.center), f.normal);
        }
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "non-finite velocity at face " << fi << " (x=" << f.center.x << ", y=" << f.center.y << ")";
            throw FieldError(os.str());
        }
        if (force_neumann_walls && f.kind == FaceKind::Neumann) value = 0.0;
        out[fi] = value;
    }
    return out;
}

ScalarField divergence_of_velocity(const Grid& grid, const FaceField& face_velocity) {
    ScalarField div(grid.cell_count());
    const double inv_vol = 1.0 / grid.cell_volume();
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
        double sum = 0.0;
        for (const auto& cf : grid.cell_faces(k)) sum += cf.sign * face_velocity[cf.face] * grid.face(cf.face).area;
        div[k] = sum * inv_vol;
    }
    return div;
}

AdmissibilityReport check_velocity_admissibility(const Grid& grid, const FaceField& face_velocity, double tol) {
    AdmissibilityReport report;
    report.min_dirichlet = std::numeric_limits<double>::infinity();
    for (std::size_t fi = 0; fi < grid.face_count(); ++fi) {
        const Face& f = grid.face(fi);
        const double v = face_velocity[fi];
        if (f.kind == FaceKind::Dirichlet) {
            report.min_dirichlet = std::min(report.min_dirichlet, v);
            if (v < -tol) {
                report.dirichlet_ok = false;
                report.offending_faces.push_back(fi);
            }
        } else if (f.kind == FaceKind::Neumann) {
            report.max_neumann = std::max(report.max_neumann, std::abs(v));
            if (std::abs(v) > tol) {
                report.neumann_ok = false;
                report.offending_faces.push_back(fi);
            }
        }
    }
    return report;
}

}  // namespace crowdflow
