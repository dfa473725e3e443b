#include "kdp/shapes.hpp"

#include <cmath>
#include <random>

#include "kdp/quadrature.hpp"

namespace kdp {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GridFunction sine_bump(const Mesh& mesh) {
    GridFunction u(mesh);
    const double pi = 3.14159265358979323846;
    u.interpolate([&](double x, double y) {
        return std::sin(pi * x / mesh.Lx) * std::sin(pi * y / mesh.Ly);
    });
    u.apply_zero_trace();
    return u;
}

GridFunction normalized_bump(const Mesh& mesh, const WeightField& w, double p, double q) {
    GridFunction u = sine_bump(mesh);
    const double nrm = luxemburg_norm_gradient(u, w, p, q);
    u *= 1.0 / nrm;
    return u;
}

GridFunction random_positive_shape(const Mesh& mesh, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0xb0b5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int nbumps = 3;
    struct Bump {
        double cx, cy, s2, amp;
    };
    std::vector<Bump> bumps;
    const double lmin = std::min(mesh.Lx, mesh.Ly);
    for (int k = 0; k < nbumps; ++k) {
        Bump b;
        b.cx = mesh.Lx * (0.2 + 0.6 * unit(rng));
        b.cy = mesh.Ly * (0.2 + 0.6 * unit(rng));
        const double s = lmin * (0.08 + 0.17 * unit(rng));
        b.s2 = s * s;
        b.amp = 0.3 + 0.7 * unit(rng);
        bumps.push_back(b);
    }

    GridFunction u(mesh);
    const double pi = 3.14159265358979323846;
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        const double x = mesh.node_x(n), y = mesh.node_y(n);
        double val = 0.05 * unit(rng);
        for (const auto& b : bumps) {
            const double dx = x - b.cx, dy = y - b.cy;
            val += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.s2));
        }
        const double mask = std::sin(pi * x / mesh.Lx) * std::sin(pi * y / mesh.Ly);
        u[n] = val * mask;
    }
    u.apply_zero_trace();
    return u;
}

GridFunction random_unit_shape(const Mesh& mesh, const WeightField& w, double p, double q,
                               std::uint64_t seed) {
    GridFunction u = random_positive_shape(mesh, seed);
    const double nrm = luxemburg_norm_gradient(u, w, p, q);
    u *= 1.0 / nrm;
    return u;
}

}  // namespace kdp
