#include "kdp/weight_field.hpp"

#include <cmath>
#include <stdexcept>

namespace kdp {

double WeightSpec::eval(double x, double y) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::indicator:
            return (x >= x0 && x <= x1 && y >= y0 && y <= y1) ? value : 0.0;
        case Kind::bump: {
            const double dx = x - cx, dy = y - cy;
            const double s2 = (dx * dx + dy * dy) / (radius * radius);
            if (s2 >= 1.0) return 0.0;
            return value * std::exp(1.0 - 1.0 / (1.0 - s2));
        }
    }
    return 0.0;
}

std::string WeightSpec::kind_name() const {
    switch (kind) {
        case Kind::constant: return "constant";
        case Kind::indicator: return "indicator";
        case Kind::bump: return "bump";
    }
    return "?";
}

WeightField::WeightField(const Mesh& mesh, const WeightSpec& spec)
    : mesh_(&mesh), spec_(spec) {
    if (spec.value < 0.0)
        throw std::invalid_argument("WeightField: amplitude must be >= 0");
    if (spec.kind == WeightSpec::Kind::bump && spec.radius <= 0.0)
        throw std::invalid_argument("WeightField: bump radius must be > 0");

    elem_.resize(static_cast<std::size_t>(mesh.n_tris()));
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const Vec2 c = mesh.tri_centroid(t);
        elem_[static_cast<std::size_t>(t)] = spec.eval(c.x, c.y);
        max_ = std::max(max_, elem_[static_cast<std::size_t>(t)]);
    }
    node_.resize(static_cast<std::size_t>(mesh.n_nodes()));
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        node_[static_cast<std::size_t>(n)] = spec.eval(mesh.node_x(n), mesh.node_y(n));
        max_ = std::max(max_, node_[static_cast<std::size_t>(n)]);
    }
}

}  // namespace kdp
