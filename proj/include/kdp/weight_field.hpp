#pragma once

#include <string>
#include <vector>

#include "kdp/mesh.hpp"

namespace kdp {

/// Analytic description of the modulating coefficient a(x) >= 0.
struct WeightSpec {
    enum class Kind { constant, indicator, bump };

    Kind kind = Kind::constant;
    double value = 0.0;  // amplitude c >= 0

    // indicator: a = value on [x0,x1] x [y0,y1], 0 elsewhere
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

    // bump: smooth radial mollifier of the given radius centered at (cx, cy)
    double cx = 0.0, cy = 0.0, radius = 0.0;

    double eval(double x, double y) const;
    std::string kind_name() const;
};

/// a(x) sampled on the mesh: per-element values at centroids (used by the
/// gradient integrals) and per-node values (used by the nodal modular).
class WeightField {
public:
    WeightField(const Mesh& mesh, const WeightSpec& spec);

    const Mesh& mesh() const { return *mesh_; }
    const WeightSpec& spec() const { return spec_; }

    double elem(int t) const { return elem_[static_cast<std::size_t>(t)]; }
    double node(int n) const { return node_[static_cast<std::size_t>(n)]; }
    double max_value() const { return max_; }
    bool all_zero() const { return max_ == 0.0; }

private:
    const Mesh* mesh_;
    WeightSpec spec_;
    std::vector<double> elem_;
    std::vector<double> node_;
    double max_ = 0.0;
};

}  // namespace kdp
