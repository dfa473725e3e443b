#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace kdp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Structured triangulation of the rectangle [0,Lx] x [0,Ly]: nx*ny cells,
/// every cell split along the same diagonal (lower-left to upper-right) into
/// two triangles. Nodes are numbered row-major: node(i,j) = j*(nx+1) + i.
///
/// Triangles come in two congruent types; shape-function gradients are
/// constant per type, so P1 gradient integrals are exact element sums.
class Mesh {
public:
    Mesh(double Lx, double Ly, int nx, int ny);

    double Lx, Ly;
    int nx, ny;
    double hx, hy;

    int n_nodes() const { return (nx + 1) * (ny + 1); }
    int n_tris() const { return 2 * nx * ny; }
    int node(int i, int j) const { return j * (nx + 1) + i; }

    double node_x(int n) const { return xs_[static_cast<std::size_t>(n)]; }
    double node_y(int n) const { return ys_[static_cast<std::size_t>(n)]; }
    bool is_boundary(int n) const { return boundary_[static_cast<std::size_t>(n)] != 0; }
    double lumped_mass(int n) const { return lumped_[static_cast<std::size_t>(n)]; }

    const std::array<int, 3>& tri(int t) const { return tris_[static_cast<std::size_t>(t)]; }
    double tri_area() const { return area_; }                 // uniform
    int tri_type(int t) const { return t & 1; }               // 0 lower, 1 upper
    Vec2 tri_centroid(int t) const;

    /// Gradient of the k-th P1 shape function on a triangle of the given type.
    Vec2 shape_gradient(int type, int k) const { return shape_grad_[type][k]; }

    /// Constant gradient of the piecewise-linear interpolant on triangle t.
    Vec2 element_gradient(const std::vector<double>& nodal, int t) const;

    /// Incident (triangle, local vertex) pairs of a node, in fixed order.
    struct Incidence {
        int tri;
        int local;
    };
    const std::vector<Incidence>& incident(int n) const { return adjacency_[static_cast<std::size_t>(n)]; }

    double total_area() const { return Lx * Ly; }

private:
    std::vector<double> xs_, ys_;
    std::vector<std::uint8_t> boundary_;
    std::vector<double> lumped_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<std::vector<Incidence>> adjacency_;
    std::array<std::array<Vec2, 3>, 2> shape_grad_;
    double area_ = 0.0;
};

}  // namespace kdp
