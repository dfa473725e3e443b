#include "kdp/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "kdp/parallel.hpp"

namespace kdp {

namespace {

void check_inputs(const GridFunction& u, const WeightField& w, double p, double q,
                  const char* what) {
    require_same_mesh(u.mesh(), w.mesh(), what);
    if (p <= 1.0 || q <= 1.0)
        throw std::invalid_argument(std::string(what) + ": exponents must be > 1");
}

}  // namespace

GradientNorms gradient_norms(const GridFunction& u, const WeightField& w, double p, double q) {
    check_inputs(u, w, p, q, "gradient_norms");
    const Mesh& m = u.mesh();
    const double area = m.tri_area();
    const auto sums = par::block_sum<2>(m.n_tris(), [&](std::ptrdiff_t t) {
        const Vec2 g = m.element_gradient(u.v, static_cast<int>(t));
        const double m2 = g.x * g.x + g.y * g.y;
        if (m2 == 0.0) return std::array<double, 2>{0.0, 0.0};
        const double a = w.elem(static_cast<int>(t));
        const double gp = std::pow(m2, 0.5 * p);
        const double gq = a > 0.0 ? a * std::pow(m2, 0.5 * q) : 0.0;
        return std::array<double, 2>{area * gp, area * gq};
    });
    return GradientNorms{sums[0], sums[1]};
}

double lp_integral(const GridFunction& u, double s) {
    if (s <= 0.0) throw std::invalid_argument("lp_integral: exponent must be > 0");
    const Mesh& m = u.mesh();
    return par::block_sum1(m.n_nodes(), [&](std::ptrdiff_t n) {
        const double x = std::fabs(u.v[static_cast<std::size_t>(n)]);
        return x > 0.0 ? m.lumped_mass(static_cast<int>(n)) * std::pow(x, s) : 0.0;
    });
}

FiberScalars fiber_scalars(const GridFunction& u, const WeightField& w,
                           double p, double q, double gamma, double r) {
    check_inputs(u, w, p, q, "fiber_scalars");
    if (gamma <= 0.0 || gamma >= 1.0)
        throw std::invalid_argument("fiber_scalars: gamma must lie in (0,1)");
    if (r <= 0.0) throw std::invalid_argument("fiber_scalars: r must be > 0");

    const GradientNorms gn = gradient_norms(u, w, p, q);
    const Mesh& m = u.mesh();
    const double s = 1.0 - gamma;
    const auto node_sums = par::block_sum<2>(m.n_nodes(), [&](std::ptrdiff_t n) {
        const double x = std::fabs(u.v[static_cast<std::size_t>(n)]);
        if (x == 0.0) return std::array<double, 2>{0.0, 0.0};
        const double mass = m.lumped_mass(static_cast<int>(n));
        return std::array<double, 2>{mass * std::pow(x, s), mass * std::pow(x, r)};
    });
    return FiberScalars{gn.Pp, gn.Qq, node_sums[0], node_sums[1]};
}

double modular_nodal(const GridFunction& u, const WeightField& w, double p, double q) {
    check_inputs(u, w, p, q, "modular_nodal");
    const Mesh& m = u.mesh();
    return par::block_sum1(m.n_nodes(), [&](std::ptrdiff_t n) {
        const double x = std::fabs(u.v[static_cast<std::size_t>(n)]);
        if (x == 0.0) return 0.0;
        const double a = w.node(static_cast<int>(n));
        return m.lumped_mass(static_cast<int>(n)) *
               (std::pow(x, p) + (a > 0.0 ? a * std::pow(x, q) : 0.0));
    });
}

double modular_gradient(const GridFunction& u, const WeightField& w, double p, double q) {
    const GradientNorms gn = gradient_norms(u, w, p, q);
    return gn.Pp + gn.Qq;
}

double luxemburg_from_parts(double Mp, double Mq, double p, double q) {
    if (Mp < 0.0 || Mq < 0.0)
        throw std::invalid_argument("luxemburg_from_parts: modular parts must be >= 0");
    const double rho = Mp + Mq;
    if (rho == 0.0) return 0.0;

    const auto excess = [&](double tau) {
        return Mp * std::pow(tau, -p) + Mq * std::pow(tau, -q) - 1.0;
    };

    // Bracket guided by the modular-norm relations: tau lies between
    // rho^(1/q) and rho^(1/p) up to the unit-sphere crossover.
    double lo = 0.5 * std::pow(rho, 1.0 / p);
    double hi = 2.0 * std::max(1.0, std::pow(rho, 1.0 / q)) + 2.0 * std::pow(rho, 1.0 / p);
    for (int k = 0; k < 200 && excess(lo) < 0.0; ++k) lo *= 0.5;
    for (int k = 0; k < 200 && excess(hi) > 0.0; ++k) hi *= 2.0;
    if (excess(lo) < 0.0 || excess(hi) > 0.0)
        throw std::runtime_error("luxemburg_from_parts: bracket expansion failed");

    while (hi - lo > 1e-12 * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double luxemburg_norm_nodal(const GridFunction& u, const WeightField& w, double p, double q) {
    check_inputs(u, w, p, q, "luxemburg_norm_nodal");
    const Mesh& m = u.mesh();
    const auto parts = par::block_sum<2>(m.n_nodes(), [&](std::ptrdiff_t n) {
        const double x = std::fabs(u.v[static_cast<std::size_t>(n)]);
        if (x == 0.0) return std::array<double, 2>{0.0, 0.0};
        const double mass = m.lumped_mass(static_cast<int>(n));
        const double a = w.node(static_cast<int>(n));
        return std::array<double, 2>{mass * std::pow(x, p),
                                     a > 0.0 ? mass * a * std::pow(x, q) : 0.0};
    });
    return luxemburg_from_parts(parts[0], parts[1], p, q);
}

double luxemburg_norm_gradient(const GridFunction& u, const WeightField& w, double p, double q) {
    const GradientNorms gn = gradient_norms(u, w, p, q);
    return luxemburg_from_parts(gn.Pp, gn.Qq, p, q);
}

AssemblyWithNorms assemble_with_norms(const GridFunction& u, const WeightField& w,
                                      double p, double q) {
    check_inputs(u, w, p, q, "assemble_with_norms");
    const Mesh& m = u.mesh();
    const std::ptrdiff_t nt = m.n_tris();
    const int nn = m.n_nodes();
    const double area = m.tri_area();

    // Element pass: constant gradients, flux factors and the norm partials,
    // block-accumulated so the combine order is thread-count independent.
    std::vector<double> gx(static_cast<std::size_t>(nt)), gy(static_cast<std::size_t>(nt));
    std::vector<double> fp(static_cast<std::size_t>(nt)), fq(static_cast<std::size_t>(nt));
    const std::ptrdiff_t nblocks = (nt + par::kBlockSize - 1) / par::kBlockSize;
    std::vector<std::array<double, 2>> partial(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
        std::array<double, 2> acc{};
        const std::ptrdiff_t lo = b * par::kBlockSize;
        const std::ptrdiff_t hi = std::min(nt, lo + par::kBlockSize);
        for (std::ptrdiff_t ti = lo; ti < hi; ++ti) {
            const int t = static_cast<int>(ti);
            const Vec2 g = m.element_gradient(u.v, t);
            gx[static_cast<std::size_t>(t)] = g.x;
            gy[static_cast<std::size_t>(t)] = g.y;
            const double m2 = g.x * g.x + g.y * g.y;
            if (m2 == 0.0) {
                fp[static_cast<std::size_t>(t)] = 0.0;
                fq[static_cast<std::size_t>(t)] = 0.0;
                continue;
            }
            // |grad u|^(s-2) grad u tends to 0 with grad u for s > 1
            const double cp = std::pow(m2, 0.5 * p - 1.0);
            const double a = w.elem(t);
            const double cq = a > 0.0 ? a * std::pow(m2, 0.5 * q - 1.0) : 0.0;
            fp[static_cast<std::size_t>(t)] = cp;
            fq[static_cast<std::size_t>(t)] = cq;
            acc[0] += area * cp * m2;
            acc[1] += area * cq * m2;
        }
        partial[static_cast<std::size_t>(b)] = acc;
    }
    AssemblyWithNorms out;
    for (const auto& a : partial) {
        out.gn.Pp += a[0];
        out.gn.Qq += a[1];
    }

    // Node pass: gather over the fixed-order incidence lists.
    out.ops.Ap.assign(static_cast<std::size_t>(nn), 0.0);
    out.ops.Aq.assign(static_cast<std::size_t>(nn), 0.0);
    out.Dp.assign(static_cast<std::size_t>(nn), 0.0);
    out.Dq.assign(static_cast<std::size_t>(nn), 0.0);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        if (m.is_boundary(n)) continue;
        double ap = 0.0, aq = 0.0, dp = 0.0, dq = 0.0;
        for (const auto& inc : m.incident(n)) {
            const Vec2 sg = m.shape_gradient(m.tri_type(inc.tri), inc.local);
            const double dot = gx[static_cast<std::size_t>(inc.tri)] * sg.x +
                               gy[static_cast<std::size_t>(inc.tri)] * sg.y;
            const double sg2 = sg.x * sg.x + sg.y * sg.y;
            ap += area * fp[static_cast<std::size_t>(inc.tri)] * dot;
            aq += area * fq[static_cast<std::size_t>(inc.tri)] * dot;
            dp += area * fp[static_cast<std::size_t>(inc.tri)] * sg2;
            dq += area * fq[static_cast<std::size_t>(inc.tri)] * sg2;
        }
        out.ops.Ap[static_cast<std::size_t>(n)] = ap;
        out.ops.Aq[static_cast<std::size_t>(n)] = aq;
        out.Dp[static_cast<std::size_t>(n)] = dp;
        out.Dq[static_cast<std::size_t>(n)] = dq;
    }
    return out;
}

OperatorVectors assemble_operator_vectors(const GridFunction& u, const WeightField& w,
                                          double p, double q) {
    return assemble_with_norms(u, w, p, q).ops;
}

FiberScalars scale_scalars(const FiberScalars& s, double c, double p, double q, double gamma,
                           double r) {
    if (!(c > 0.0)) throw std::invalid_argument("scale_scalars: scale must be positive");
    return FiberScalars{s.Pp * std::pow(c, p), s.Qq * std::pow(c, q),
                        s.Is * std::pow(c, 1.0 - gamma), s.Ir * std::pow(c, r)};
}

// ---------------------------------------------------------------------------
// Serial reference
// ---------------------------------------------------------------------------
namespace ref {

GradientNorms gradient_norms(const GridFunction& u, const WeightField& w, double p, double q) {
    check_inputs(u, w, p, q, "ref::gradient_norms");
    const Mesh& m = u.mesh();
    const double area = m.tri_area();
    GradientNorms out;
    for (int t = 0; t < m.n_tris(); ++t) {
        const Vec2 g = m.element_gradient(u.v, t);
        const double m2 = g.x * g.x + g.y * g.y;
        if (m2 == 0.0) continue;
        out.Pp += area * std::pow(m2, 0.5 * p);
        const double a = w.elem(t);
        if (a > 0.0) out.Qq += area * a * std::pow(m2, 0.5 * q);
    }
    return out;
}

double lp_integral(const GridFunction& u, double s) {
    if (s <= 0.0) throw std::invalid_argument("ref::lp_integral: exponent must be > 0");
    const Mesh& m = u.mesh();
    double acc = 0.0;
    for (int n = 0; n < m.n_nodes(); ++n) {
        const double x = std::fabs(u.v[static_cast<std::size_t>(n)]);
        if (x > 0.0) acc += m.lumped_mass(n) * std::pow(x, s);
    }
    return acc;
}

FiberScalars fiber_scalars(const GridFunction& u, const WeightField& w,
                           double p, double q, double gamma, double r) {
    const GradientNorms gn = ref::gradient_norms(u, w, p, q);
    return FiberScalars{gn.Pp, gn.Qq, ref::lp_integral(u, 1.0 - gamma), ref::lp_integral(u, r)};
}

OperatorVectors assemble_operator_vectors(const GridFunction& u, const WeightField& w,
                                          double p, double q) {
    check_inputs(u, w, p, q, "ref::assemble_operator_vectors");
    const Mesh& m = u.mesh();
    const double area = m.tri_area();
    OperatorVectors out;
    out.Ap.assign(static_cast<std::size_t>(m.n_nodes()), 0.0);
    out.Aq.assign(static_cast<std::size_t>(m.n_nodes()), 0.0);
    for (int t = 0; t < m.n_tris(); ++t) {
        const Vec2 g = m.element_gradient(u.v, t);
        const double m2 = g.x * g.x + g.y * g.y;
        if (m2 == 0.0) continue;
        const double cp = std::pow(m2, 0.5 * p - 1.0);
        const double a = w.elem(t);
        const double cq = a > 0.0 ? a * std::pow(m2, 0.5 * q - 1.0) : 0.0;
        const auto& v = m.tri(t);
        for (int k = 0; k < 3; ++k) {
            const Vec2 sg = m.shape_gradient(m.tri_type(t), k);
            const double dot = g.x * sg.x + g.y * sg.y;
            out.Ap[static_cast<std::size_t>(v[k])] += area * cp * dot;
            out.Aq[static_cast<std::size_t>(v[k])] += area * cq * dot;
        }
    }
    for (int n = 0; n < m.n_nodes(); ++n) {
        if (m.is_boundary(n)) {
            out.Ap[static_cast<std::size_t>(n)] = 0.0;
            out.Aq[static_cast<std::size_t>(n)] = 0.0;
        }
    }
    return out;
}

}  // namespace ref

}  // namespace kdp
