#include "kdp/nehari.hpp"

#include <chrono>
#include <cmath>

#include "kdp/parallel.hpp"
#include "kdp/shapes.hpp"

namespace kdp {

std::string to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

namespace {

double singular_floor(const GridFunction& u) { return 1e-8 * u.max(); }

// Closed-form part of the projection: everything after the quadrature of the
// input shape. Normalizes by ||grad u||_p for conditioning (roots scale
// exactly inversely), so no extra mesh pass is needed.
struct ProjectionCore {
    double scale_t = 0.0;  // w = scale_t * u
    FiberScalars sc_w;
    double energy = 0.0;
    double psi2 = 0.0;
};

ProjectionCore project_core(const FiberScalars& sc_u, Branch branch, const ProblemParams& prm,
                            double lambda, ProblemForm form) {
    if (!(sc_u.Pp > 0.0))
        throw std::invalid_argument("project: shape must be nonzero");
    const double c = std::pow(sc_u.Pp, 1.0 / prm.p);
    const FiberScalars sc_shape = scale_scalars(sc_u, 1.0 / c, prm.p, prm.q, prm.gamma, prm.r);

    const FiberMap f(prm, sc_shape, lambda, form);
    const double tmax = fiber_tmax(f);
    const auto roots = fiber_roots(f, tmax);
    if (!roots)
        throw LambdaTooLargeError(
            "project: sigma(tmax) <= lambda*Is; lambda too large for this shape");
    const double t = branch == Branch::plus ? roots->t1 : roots->t2;

    ProjectionCore out;
    out.scale_t = t / c;
    out.sc_w = scale_scalars(sc_u, out.scale_t, prm.p, prm.q, prm.gamma, prm.r);
    const FiberMap fw(prm, out.sc_w, lambda, form);
    out.energy = fw.psi(1.0);
    out.psi2 = fw.psi2(1.0);
    return out;
}

}  // namespace

NehariPoint project(const GridFunction& u, Branch branch, const ProblemParams& prm,
                    const WeightField& w, ProblemForm form) {
    if (u.is_zero()) throw std::invalid_argument("project: shape must be nonzero");
    for (double x : u.v)
        if (x < 0.0) throw std::invalid_argument("project: shape must be nonnegative");
    const double lambda = prm.lambda_value();

    const FiberScalars sc_u = fiber_scalars(u, w, prm.p, prm.q, prm.gamma, prm.r);
    const ProjectionCore core = project_core(sc_u, branch, prm, lambda, form);

    NehariPoint pt{GridFunction(u.mesh()), branch};
    pt.w = core.scale_t * u;
    pt.scale_t = core.scale_t;
    pt.scalars = core.sc_w;
    pt.energy = core.energy;
    pt.psi2 = core.psi2;
    pt.residual = assemble_energy_gradient(pt.w, prm, w, singular_floor(pt.w), form).residual();
    return pt;
}

GradientAssembly assemble_energy_gradient(const GridFunction& wpt, const ProblemParams& prm,
                                          const WeightField& w, double floor, ProblemForm form) {
    if (wpt.is_zero()) throw std::invalid_argument("energy gradient: wpt must be nonzero");
    const double lambda = prm.lambda_value();
    const Mesh& m = wpt.mesh();

    const AssemblyWithNorms asmn = assemble_with_norms(wpt, w, prm.p, prm.q);
    const GradientNorms& gn = asmn.gn;

    double factor_p, factor_q;
    if (form == ProblemForm::coupled) {
        factor_p = factor_q = kirchhoff_m(phi_H(gn.Pp, gn.Qq, prm.p, prm.q), prm);
    } else {
        factor_p = kirchhoff_m(gn.Pp, prm);
        factor_q = kirchhoff_m(gn.Qq, prm);
    }

    GradientAssembly out{GridFunction(m)};
    out.hdiag.assign(static_cast<std::size_t>(m.n_nodes()), 1.0);
    // Rank-one curvature of the nonlocal Kirchhoff composition, used by the
    // preconditioner: coupled m'(phi) (dphi)(dphi)^T with dphi = Ap + Aq;
    // separated p m'(Pp) Ap Ap^T + q m'(Qq) Aq Aq^T.
    const double th = prm.theta;
    if (form == ProblemForm::coupled) {
        if (th != 1.0) {
            const double phi = phi_H(gn.Pp, gn.Qq, prm.p, prm.q);
            out.rank1_coeff[0] = prm.b0 * (th - 1.0) * std::pow(phi, th - 2.0);
            out.rank1_vec[0].resize(static_cast<std::size_t>(m.n_nodes()));
            for (int n = 0; n < m.n_nodes(); ++n)
                out.rank1_vec[0][static_cast<std::size_t>(n)] =
                    asmn.ops.Ap[static_cast<std::size_t>(n)] +
                    asmn.ops.Aq[static_cast<std::size_t>(n)];
        }
    } else if (th != 1.0) {
        if (gn.Pp > 0.0) {
            out.rank1_coeff[0] = prm.p * prm.b0 * (th - 1.0) * std::pow(gn.Pp, th - 2.0);
            out.rank1_vec[0] = asmn.ops.Ap;
        }
        if (gn.Qq > 0.0) {
            out.rank1_coeff[1] = prm.q * prm.b0 * (th - 1.0) * std::pow(gn.Qq, th - 2.0);
            out.rank1_vec[1] = asmn.ops.Aq;
        }
    }
    auto& g = out.g;
    // Residual norms live in the dual metric of the local curvature (entries
    // weighted by 1/hdiag): weak-form residuals are dual objects and a plain
    // l2 norm would over-count the stiff rows where |grad u| degenerates.
    const auto norms = par::block_sum<6>(m.n_nodes(), [&](std::ptrdiff_t ni) {
        const int n = static_cast<int>(ni);
        const double un = wpt[n];
        const double mass = m.lumped_mass(n);
        const double au = std::fabs(un);
        const double is = au > 0.0 ? mass * std::pow(au, 1.0 - prm.gamma) : 0.0;
        const double ir = au > 0.0 ? mass * std::pow(au, prm.r) : 0.0;
        if (m.is_boundary(n)) return std::array<double, 6>{0.0, 0.0, 0.0, 0.0, is, ir};
        const double op = factor_p * asmn.ops.Ap[static_cast<std::size_t>(n)] +
                          factor_q * asmn.ops.Aq[static_cast<std::size_t>(n)];
        const double base = std::max(un, floor);
        const double sing = lambda * mass * std::pow(base, -prm.gamma);
        const double power = un > 0.0 ? mass * std::pow(un, prm.r - 1.0) : 0.0;
        const double gi = op - sing - power;
        g[n] = gi;
        // positive curvature surrogate: local stiffness plus the magnitudes of
        // the lower-order second derivatives
        const double hd =
            factor_p * (prm.p - 1.0) * asmn.Dp[static_cast<std::size_t>(n)] +
            factor_q * (prm.q - 1.0) * asmn.Dq[static_cast<std::size_t>(n)] +
            mass * (lambda * prm.gamma * std::pow(base, -prm.gamma - 1.0) +
                    (prm.r - 1.0) * std::pow(base, prm.r - 2.0));
        out.hdiag[static_cast<std::size_t>(n)] = hd;
        return std::array<double, 6>{gi * gi / hd, op * op / hd, sing * sing / hd,
                                     power * power / hd, is, ir};
    });
    out.norm_g = std::sqrt(norms[0]);
    out.norm_parts = std::sqrt(norms[1]) + std::sqrt(norms[2]) + std::sqrt(norms[3]);
    // Energy scale: the sum of the magnitudes of the three energy terms.
    // norm_g^2 has energy units, so norm_g^2 / energy_scale is the relative
    // Newton decrement; its square root is the reported residual.
    double upper;
    if (form == ProblemForm::coupled) {
        upper = kirchhoff_M(phi_H(gn.Pp, gn.Qq, prm.p, prm.q), prm);
    } else {
        upper = kirchhoff_M(gn.Pp, prm) / prm.p + kirchhoff_M(gn.Qq, prm) / prm.q;
    }
    out.energy_scale = upper + lambda / (1.0 - prm.gamma) * norms[4] + norms[5] / prm.r;
    return out;
}

GridFunction discrete_gradient(const GridFunction& wpt, const ProblemParams& prm,
                               const WeightField& w, double floor, ProblemForm form) {
    return assemble_energy_gradient(wpt, prm, w, floor, form).g;
}

void GradientAssembly::apply_seed_inverse(std::vector<double>& x) const {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) x[i] /= hdiag[i];

    // first rank-one correction against the diagonal
    std::vector<double> z0;
    double denom0 = 1.0;
    if (rank1_coeff[0] > 0.0 && !rank1_vec[0].empty()) {
        const auto& v0 = rank1_vec[0];
        z0.resize(n);
        double vDv = 0.0, vx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            z0[i] = v0[i] / hdiag[i];
            vDv += v0[i] * z0[i];
            vx += v0[i] * x[i];
        }
        denom0 = 1.0 + rank1_coeff[0] * vDv;
        const double f = rank1_coeff[0] * vx / denom0;
        for (std::size_t i = 0; i < n; ++i) x[i] -= f * z0[i];
    }

    // second rank-one correction against diagonal + first term
    if (rank1_coeff[1] > 0.0 && !rank1_vec[1].empty()) {
        const auto& v1 = rank1_vec[1];
        std::vector<double> z1(n);
        for (std::size_t i = 0; i < n; ++i) z1[i] = v1[i] / hdiag[i];
        if (!z0.empty()) {
            const auto& v0 = rank1_vec[0];
            double v0z1 = 0.0;
            for (std::size_t i = 0; i < n; ++i) v0z1 += v0[i] * z1[i];
            const double f = rank1_coeff[0] * v0z1 / denom0;
            for (std::size_t i = 0; i < n; ++i) z1[i] -= f * z0[i];
        }
        double v1z1 = 0.0, v1x = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v1z1 += v1[i] * z1[i];
            v1x += v1[i] * x[i];
        }
        const double f1 = rank1_coeff[1] * v1x / (1.0 + rank1_coeff[1] * v1z1);
        for (std::size_t i = 0; i < n; ++i) x[i] -= f1 * z1[i];
    }
}

namespace {

// Limited-memory quasi-Newton direction seeded with the Jacobi diagonal.
// Pairs violating the curvature condition are skipped.
class LbfgsMemory {
public:
    explicit LbfgsMemory(std::size_t capacity) : cap_(capacity) {}

    void clear() { pairs_.clear(); }

    void push(std::vector<double> s, std::vector<double> y) {
        double sy = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) sy += s[i] * y[i];
        if (!(sy > 0.0)) return;
        pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
        if (pairs_.size() > cap_) pairs_.erase(pairs_.begin());
    }

    // Two-loop recursion: approximates Hinv * g; the seed solve applies the
    // inverse of the initial Hessian model in place.
    template <class SeedSolve>
    std::vector<double> direction(const std::vector<double>& g, SeedSolve&& seed) const {
        std::vector<double> q = g;
        std::vector<double> alpha(pairs_.size());
        for (std::size_t i = pairs_.size(); i-- > 0;) {
            const Pair& pr = pairs_[i];
            double sq = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) sq += pr.s[k] * q[k];
            alpha[i] = pr.rho * sq;
            for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * pr.y[k];
        }
        seed(q);
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            const Pair& pr = pairs_[i];
            double yq = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) yq += pr.y[k] * q[k];
            const double beta = pr.rho * yq;
            for (std::size_t k = 0; k < q.size(); ++k) q[k] += pr.s[k] * (alpha[i] - beta);
        }
        return q;
    }

private:
    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::size_t cap_;
    std::vector<Pair> pairs_;
};

}  // namespace

NehariPoint minimize_branch(const GridFunction& u0, Branch branch, const ProblemParams& prm,
                            const WeightField& w, const SolveOptions& opts, ProblemForm form,
                            std::vector<IterationRecord>* history) {
    const Mesh& m = u0.mesh();
    const double lambda = prm.lambda_value();
    NehariPoint cur = project(u0, branch, prm, w, form);

    LbfgsMemory memory(8);
    std::vector<double> prev_w, prev_g;
    int stall = 0;
    bool converged = false;
    long iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        const GradientAssembly ga =
            assemble_energy_gradient(cur.w, prm, w, singular_floor(cur.w), form);
        cur.residual = ga.residual();
        if (history) history->push_back({iter, branch, cur.energy, cur.residual, cur.scale_t});

        if (stall >= opts.stall_iters) {
            converged = true;
            break;
        }

        if (!prev_w.empty()) {
            std::vector<double> sv(prev_w.size()), yv(prev_w.size());
            for (std::size_t i = 0; i < prev_w.size(); ++i) {
                sv[i] = cur.w.v[i] - prev_w[i];
                yv[i] = ga.g.v[i] - prev_g[i];
            }
            memory.push(std::move(sv), std::move(yv));
        }
        prev_w = cur.w.v;
        prev_g = ga.g.v;

        // Quasi-Newton direction with backtracking acceptance on the
        // re-projected energy; falls back to the Jacobi-preconditioned
        // gradient when the memory fails to produce a descent direction.
        const auto seed_solve = [&](std::vector<double>& q) { ga.apply_seed_inverse(q); };
        std::vector<double> dir = memory.direction(ga.g.v, seed_solve);
        double dg = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i) dg += dir[i] * ga.g.v[i];
        if (!(dg > 0.0)) {
            memory.clear();
            dir = ga.g.v;
            ga.apply_seed_inverse(dir);
        }

        double s = 1.0;
        std::optional<ProjectionCore> core;
        GridFunction trial(m);
        while (s > 1e-18) {
            trial = cur.w;
            for (int n = 0; n < m.n_nodes(); ++n)
                if (!m.is_boundary(n)) trial[n] -= s * dir[static_cast<std::size_t>(n)];
            trial.clamp_nonnegative();
            if (trial.is_zero()) {
                s *= 0.5;
                continue;
            }
            const FiberScalars sc = fiber_scalars(trial, w, prm.p, prm.q, prm.gamma, prm.r);
            try {
                core = project_core(sc, branch, prm, lambda, form);
            } catch (const LambdaTooLargeError&) {
                core.reset();
                s *= 0.5;
                continue;
            }
            if (core->energy < cur.energy) break;
            core.reset();
            s *= 0.5;
        }
        if (!core) {
            converged = true;  // no decrease at line-search resolution
            break;
        }

        const double rel =
            (cur.energy - core->energy) / std::max(std::fabs(core->energy), 1e-30);
        NehariPoint nextpt{core->scale_t * trial, branch};
        nextpt.scale_t = core->scale_t;
        nextpt.scalars = core->sc_w;
        nextpt.energy = core->energy;
        nextpt.psi2 = core->psi2;
        nextpt.residual = cur.residual;
        cur = std::move(nextpt);
        stall = rel < opts.energy_stall_tol ? stall + 1 : 0;
    }

    cur.converged = converged;
    cur.iterations = iter;
    cur.residual = assemble_energy_gradient(cur.w, prm, w, singular_floor(cur.w), form).residual();
    return cur;
}

SolveReport solve(const ProblemParams& params, const WeightField& w, const SolveOptions& opts,
                  ProblemForm form) {
    const auto t0 = std::chrono::steady_clock::now();
    require_admissible(params);
    const Mesh& mesh = w.mesh();

    SolveReport rep;
    rep.form = form;

    SobolevOptions sopts = opts.sobolev;
    sopts.seed = mix_seed(opts.seed, 0x50b);
    const SobolevEstimate sob =
        sobolev_constant(mesh, params.p, critical_exponent(params.p, params.N), sopts);
    rep.thresholds = thresholds(params, sob, mesh.total_area());

    ProblemParams prm = params;
    prm.lambda = rep.thresholds.lambda;
    rep.params = prm;
    if (*prm.lambda > rep.thresholds.Lambda3)
        rep.messages.push_back(
            "warning: lambda exceeds Lambda3; the two-solution hypotheses are not guaranteed");

    std::vector<GridFunction> inits;
    inits.push_back(normalized_bump(mesh, w, prm.p, prm.q));
    for (int k = 0; k < opts.restarts; ++k)
        inits.push_back(random_unit_shape(mesh, w, prm.p, prm.q, mix_seed(opts.seed, 7 + k)));

    for (Branch branch : {Branch::plus, Branch::minus}) {
        std::optional<NehariPoint> best;
        std::vector<IterationRecord> best_history;
        for (std::size_t k = 0; k < inits.size(); ++k) {
            std::vector<IterationRecord> hist;
            try {
                NehariPoint pt = minimize_branch(inits[k], branch, prm, w, opts, form, &hist);
                if (!best || pt.energy < best->energy) {
                    best = std::move(pt);
                    best_history = std::move(hist);
                }
            } catch (const LambdaTooLargeError& e) {
                rep.messages.push_back("branch " + to_string(branch) + " initializer " +
                                       std::to_string(k) + ": " + e.what());
            }
        }
        if (best) {
            rep.history.insert(rep.history.end(), best_history.begin(), best_history.end());
            if (branch == Branch::plus)
                rep.plus = std::move(best);
            else
                rep.minus = std::move(best);
        }
    }

    rep.partial = !(rep.plus && rep.minus && rep.plus->converged && rep.minus->converged);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace kdp
