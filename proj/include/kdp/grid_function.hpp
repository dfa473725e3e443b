#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kdp/mesh.hpp"

namespace kdp {

/// Nodal values on a Mesh with homogeneous Dirichlet trace (the discrete
/// counterpart of the zero-trace Sobolev space). Owners mutate values
/// directly and re-apply the trace when needed.
class GridFunction {
public:
    explicit GridFunction(const Mesh& mesh)
        : v(static_cast<std::size_t>(mesh.n_nodes()), 0.0), mesh_(&mesh) {}

    const Mesh& mesh() const { return *mesh_; }

    std::vector<double> v;

    double& operator[](int n) { return v[static_cast<std::size_t>(n)]; }
    double operator[](int n) const { return v[static_cast<std::size_t>(n)]; }

    void apply_zero_trace() {
        for (int n = 0; n < mesh_->n_nodes(); ++n)
            if (mesh_->is_boundary(n)) v[static_cast<std::size_t>(n)] = 0.0;
    }

    /// Nodal interpolation of f(x, y); boundary stays at the sampled value,
    /// call apply_zero_trace() afterwards for space membership.
    void interpolate(const std::function<double(double, double)>& f) {
        for (int n = 0; n < mesh_->n_nodes(); ++n)
            v[static_cast<std::size_t>(n)] = f(mesh_->node_x(n), mesh_->node_y(n));
    }

    bool is_zero() const {
        for (double x : v)
            if (x != 0.0) return false;
        return true;
    }

    double max() const {
        double m = v.empty() ? 0.0 : v[0];
        for (double x : v) m = std::max(m, x);
        return m;
    }

    double min() const {
        double m = v.empty() ? 0.0 : v[0];
        for (double x : v) m = std::min(m, x);
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }

    GridFunction& operator*=(double c) {
        for (double& x : v) x *= c;
        return *this;
    }

    friend GridFunction operator*(double c, const GridFunction& u) {
        GridFunction out = u;
        out *= c;
        return out;
    }

    void clamp_nonnegative() {
        for (double& x : v) x = std::max(x, 0.0);
    }

private:
    const Mesh* mesh_;
};

inline void require_same_mesh(const Mesh& a, const Mesh& b, const char* what) {
    if (&a != &b) throw std::invalid_argument(std::string(what) + ": mesh mismatch");
}

}  // namespace kdp
