#include "kdp/mesh.hpp"

#include <stdexcept>

namespace kdp {

Mesh::Mesh(double Lx_, double Ly_, int nx_, int ny_)
    : Lx(Lx_), Ly(Ly_), nx(nx_), ny(ny_) {
    if (Lx <= 0.0 || Ly <= 0.0) throw std::invalid_argument("Mesh: side lengths must be positive");
    if (nx < 1 || ny < 1) throw std::invalid_argument("Mesh: cell counts must be >= 1");

    hx = Lx / nx;
    hy = Ly / ny;
    area_ = 0.5 * hx * hy;

    const int nn = n_nodes();
    xs_.resize(nn);
    ys_.resize(nn);
    boundary_.resize(nn);
    lumped_.assign(nn, 0.0);
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const int n = node(i, j);
            xs_[n] = i * hx;
            ys_[n] = j * hy;
            boundary_[n] = (i == 0 || i == nx || j == 0 || j == ny) ? 1 : 0;
        }
    }

    tris_.reserve(static_cast<std::size_t>(n_tris()));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = node(i, j), b = node(i + 1, j);
            const int c = node(i + 1, j + 1), d = node(i, j + 1);
            tris_.push_back({a, b, c});  // lower, type 0
            tris_.push_back({a, c, d});  // upper, type 1
        }
    }

    // Lumped mass: one third of each incident triangle's area.
    adjacency_.resize(nn);
    for (int t = 0; t < n_tris(); ++t) {
        const auto& v = tris_[static_cast<std::size_t>(t)];
        for (int k = 0; k < 3; ++k) {
            lumped_[v[k]] += area_ / 3.0;
            adjacency_[static_cast<std::size_t>(v[k])].push_back({t, k});
        }
    }

    // Shape gradients per triangle type.
    // Lower (0,0)-(hx,0)-(hx,hy); upper (0,0)-(hx,hy)-(0,hy).
    shape_grad_[0] = {Vec2{-1.0 / hx, 0.0}, Vec2{1.0 / hx, -1.0 / hy}, Vec2{0.0, 1.0 / hy}};
    shape_grad_[1] = {Vec2{0.0, -1.0 / hy}, Vec2{1.0 / hx, 0.0}, Vec2{-1.0 / hx, 1.0 / hy}};
}

Vec2 Mesh::tri_centroid(int t) const {
    const auto& v = tris_[static_cast<std::size_t>(t)];
    return Vec2{(xs_[v[0]] + xs_[v[1]] + xs_[v[2]]) / 3.0,
                (ys_[v[0]] + ys_[v[1]] + ys_[v[2]]) / 3.0};
}

Vec2 Mesh::element_gradient(const std::vector<double>& nodal, int t) const {
    const auto& v = tris_[static_cast<std::size_t>(t)];
    const auto& g = shape_grad_[static_cast<std::size_t>(tri_type(t))];
    Vec2 out;
    for (int k = 0; k < 3; ++k) {
        const double u = nodal[static_cast<std::size_t>(v[k])];
        out.x += u * g[k].x;
        out.y += u * g[k].y;
    }
    return out;
}

}  // namespace kdp
