#include "kdp/fibering.hpp"

#include <cmath>
#include <limits>

#include "kdp/shapes.hpp"

namespace kdp {

double fiber_tmax(const FiberMap& f) {
    const double target = f.Tu_target();
    if (!(target > 0.0))
        throw std::domain_error("fiber_tmax: the shape must have a positive |u|^r integral");

    double lo, hi;
    if (f.Tu(1.0) > target) {
        lo = 1.0;
        hi = 2.0;
        int k = 0;
        while (f.Tu(hi) > target) {
            lo = hi;
            hi *= 2.0;
            if (++k > 200) throw BracketError("fiber_tmax: right bracket expansion cap hit");
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        int k = 0;
        while (f.Tu(lo) <= target) {
            hi = lo;
            lo *= 0.5;
            if (++k > 200) throw BracketError("fiber_tmax: left bracket expansion cap hit");
        }
    }

    // Tu strictly decreasing: Tu(lo) > target >= Tu(hi).
    for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f.Tu(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double t_lower_bound(const ProblemParams& prm, const FiberScalars& s, double S, double volume) {
    if (!(s.Pp > 0.0)) throw std::domain_error("t_lower_bound: requires a nonzero gradient");
    if (!(S > 0.0) || !(volume > 0.0))
        throw std::invalid_argument("t_lower_bound: S and volume must be positive");
    const double p = prm.p, r = prm.r, g = prm.gamma, th = prm.theta;
    const double pstar = critical_exponent(p, prm.N);
    const double grad_p = std::pow(s.Pp, 1.0 / p);
    const double num = prm.b0 * (p - 1.0 + g) * std::pow(S, r / p);
    const double den = std::pow(p, th - 1.0) * (r - 1.0 + g) * std::pow(volume, 1.0 - r / pstar);
    return std::pow(num / den, 1.0 / (r - p * th)) / grad_p;
}

std::optional<FiberRoots> fiber_roots(const FiberMap& f, double tmax) {
    const double target = f.lambda() * f.scalars().Is;
    if (!(f.sigma(tmax) > target)) return std::nullopt;
    const double tol = 1e-10 * std::max(1.0, target);
    const double eps = 4.0 * std::numeric_limits<double>::epsilon();

    // Left root: sigma increases on (0, tmax) from 0, so shrink until below.
    double lo = 0.5 * tmax;
    {
        int k = 0;
        while (f.sigma(lo) >= target) {
            lo *= 0.5;
            if (++k > 200) throw BracketError("fiber_roots: left bracket expansion cap hit");
        }
    }
    double hi = tmax;
    double t1 = lo;
    for (int i = 0; i < 300; ++i) {
        t1 = 0.5 * (lo + hi);
        const double val = f.sigma(t1);
        if (std::fabs(val - target) <= tol) break;
        if (val < target)
            lo = t1;
        else
            hi = t1;
        if (hi - lo <= eps * hi) break;
    }

    // Right root: sigma decreases to -inf on (tmax, inf).
    double lo2 = tmax;
    double hi2 = 2.0 * tmax;
    {
        int k = 0;
        while (f.sigma(hi2) >= target) {
            lo2 = hi2;
            hi2 *= 2.0;
            if (++k > 200) throw BracketError("fiber_roots: right bracket expansion cap hit");
        }
    }
    double t2 = hi2;
    for (int i = 0; i < 300; ++i) {
        t2 = 0.5 * (lo2 + hi2);
        const double val = f.sigma(t2);
        if (std::fabs(val - target) <= tol) break;
        if (val > target)
            lo2 = t2;
        else
            hi2 = t2;
        if (hi2 - lo2 <= eps * hi2) break;
    }

    return FiberRoots{t1, t2};
}

std::string to_string(NehariClass c) {
    switch (c) {
        case NehariClass::Nplus: return "Nplus";
        case NehariClass::Nminus: return "Nminus";
        case NehariClass::Nzero: return "Nzero";
        case NehariClass::NotOnNehari: return "NotOnNehari";
    }
    return "?";
}

NehariClass classify(const GridFunction& u, const ProblemParams& prm, const WeightField& w,
                     double tol_stationarity, ProblemForm form) {
    if (u.is_zero()) throw std::invalid_argument("classify: u must be nonzero");
    const FiberScalars s = fiber_scalars(u, w, prm.p, prm.q, prm.gamma, prm.r);
    const FiberMap f(prm, s, prm.lambda_value(), form);
    const double scale = std::max(1.0, prm.a0 + prm.b0) * (s.Pp + s.Qq);
    if (std::fabs(f.psi1(1.0)) > tol_stationarity * scale) return NehariClass::NotOnNehari;
    const double curv = f.psi2(1.0);
    if (std::fabs(curv) <= tol_stationarity * scale) return NehariClass::Nzero;
    return curv > 0.0 ? NehariClass::Nplus : NehariClass::Nminus;
}

// ---------------------------------------------------------------------------
// Sobolev constant
// ---------------------------------------------------------------------------

namespace {

struct Quotient {
    double R = 0.0, Pp = 0.0, Istar = 0.0;
};

Quotient rayleigh(const GridFunction& u, const WeightField& w0, double p, double pstar) {
    Quotient out;
    out.Pp = gradient_norms(u, w0, p, std::max(p, 2.0)).Pp;
    out.Istar = lp_integral(u, pstar);
    out.R = out.Istar > 0.0 ? out.Pp / std::pow(out.Istar, p / pstar)
                            : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace

SobolevEstimate sobolev_constant(const Mesh& mesh, double p, double pstar,
                                 const SobolevOptions& opts) {
    if (!(p > 1.0) || !(pstar > p))
        throw std::invalid_argument("sobolev_constant: requires 1 < p < p*");
    WeightSpec zero;
    zero.kind = WeightSpec::Kind::constant;
    zero.value = 0.0;
    const WeightField w0(mesh, zero);

    SobolevEstimate est;
    est.restarts = opts.restarts;
    est.nx = mesh.nx;
    est.ny = mesh.ny;
    est.p = p;
    est.pstar = pstar;

    double best = std::numeric_limits<double>::infinity();
    bool any_improved = false;

    for (int k = 0; k < opts.restarts; ++k) {
        GridFunction u = (k == 0) ? sine_bump(mesh)
                                  : random_positive_shape(mesh, mix_seed(opts.seed, 101 + k));
        Quotient cur = rayleigh(u, w0, p, pstar);
        u *= std::pow(cur.Istar, -1.0 / pstar);
        cur = rayleigh(u, w0, p, pstar);
        const double R0 = cur.R;

        std::vector<double> prev_u, prev_d;
        double step = 1.0;
        for (int iter = 0; iter < opts.max_iter; ++iter) {
            ++est.iterations;
            const AssemblyWithNorms asmn = assemble_with_norms(u, w0, p, std::max(p, 2.0));
            GridFunction dir(mesh);
            const double ratio = cur.Pp / cur.Istar;
            for (int n = 0; n < mesh.n_nodes(); ++n) {
                if (mesh.is_boundary(n)) continue;
                const double un = u[n];
                const double mass = mesh.lumped_mass(n);
                const double au = std::fabs(un);
                const double flux = un != 0.0 ? std::pow(au, pstar - 2.0) * un : 0.0;
                const double g =
                    p * (asmn.ops.Ap[static_cast<std::size_t>(n)] - ratio * mass * flux);
                const double hd =
                    p * (p - 1.0) * asmn.Dp[static_cast<std::size_t>(n)] +
                    p * ratio * (pstar - 1.0) * mass *
                        (un != 0.0 ? std::pow(au, pstar - 2.0) : 0.0) +
                    1e-300;
                dir[n] = g / hd;
            }

            // Barzilai-Borwein guess, backtracking as the safeguard.
            double s0 = step;
            if (!prev_u.empty()) {
                double num = 0.0, den = 0.0;
                for (int n = 0; n < mesh.n_nodes(); ++n) {
                    const double du = u[n] - prev_u[static_cast<std::size_t>(n)];
                    const double dd = dir[n] - prev_d[static_cast<std::size_t>(n)];
                    num += du * dd;
                    den += dd * dd;
                }
                if (num > 0.0 && den > 0.0) s0 = num / den;
            }
            prev_u = u.v;
            prev_d = dir.v;

            double s = s0;
            bool accepted = false;
            GridFunction trial(mesh);
            Quotient next;
            while (s > 1e-20) {
                trial = u;
                for (int n = 0; n < mesh.n_nodes(); ++n) trial[n] -= s * dir[n];
                if (trial.is_zero()) {
                    s *= 0.5;
                    continue;
                }
                next = rayleigh(trial, w0, p, pstar);
                if (next.R < cur.R) {
                    accepted = true;
                    break;
                }
                s *= 0.5;
            }
            if (!accepted) break;

            const double rel = (cur.R - next.R) / cur.R;
            trial *= std::pow(next.Istar, -1.0 / pstar);
            u = trial;
            cur = rayleigh(u, w0, p, pstar);
            step = std::min(s * 2.0, 1e4);
            if (rel < opts.quotient_tol) break;
        }

        if (cur.R < R0) any_improved = true;
        if (cur.R < best) {
            best = cur.R;
            est.best_restart = k;
        }
    }

    if (!any_improved)
        throw std::runtime_error(
            "sobolev_constant: descent failed to reduce the quotient from any restart");

    est.S = best;
    est.converged = true;
    return est;
}

// ---------------------------------------------------------------------------
// Threshold constants
// ---------------------------------------------------------------------------

ThresholdReport thresholds(const ProblemParams& prm, const SobolevEstimate& sob, double volume) {
    require_admissible(prm, false);  // the exploratory override is never honored here
    if (!(sob.S > 0.0)) throw std::invalid_argument("thresholds: S must be positive");
    if (!(volume > 0.0)) throw std::invalid_argument("thresholds: volume must be positive");

    const double p = prm.p, q = prm.q, r = prm.r, g = prm.gamma, th = prm.theta;
    const double b0 = prm.b0, S = sob.S;
    const double pstar = critical_exponent(p, prm.N);
    const double pth = p * th;
    const double rpq = r - p - q * (th - 1.0);
    if (!(r > pth) || !(rpq > 0.0) || !(r > q * th))
        throw std::domain_error("thresholds: exponent configuration zeroes a denominator");

    const double p_pow = std::pow(p, th - 1.0);

    ThresholdReport rep;
    rep.S = S;
    rep.volume = volume;
    rep.provenance = sob;

    rep.A = (p - 1.0 + g) * b0 / (p_pow * (r - 1.0 + g));
    rep.B = std::pow(S, -r / p) * std::pow(volume, 1.0 - r / pstar);
    rep.C = std::pow((r - 1.0 + g) * std::pow(volume, 1.0 - (1.0 - g) / pstar) *
                         std::pow(S, -(1.0 - g) / p) * p_pow / (b0 * rpq),
                     1.0 / (pth - 1.0 + g));
    rep.Lambda1 = std::pow(rep.A / (rep.B * std::pow(rep.C, r - pth)),
                           (pth - 1.0 + g) / (r - pth));

    const double sigma_core = b0 * (p - 1.0 + g) * std::pow(S, r / p) /
                              (p_pow * (r - 1.0 + g) * std::pow(volume, 1.0 - r / pstar));
    rep.Lambda2 = b0 / p_pow * ((r - p) / (r - 1.0 + g)) *
                  std::pow(sigma_core, (pth - 1.0 + g) / (r - pth)) *
                  std::pow(S, (1.0 - g) / p) / std::pow(volume, (pstar + g - 1.0) / pstar);

    rep.D2 = std::pow(b0 * (p - 1.0) /
                          (p_pow * (r - 1.0 + g) * std::pow(volume, 1.0 - r / pstar) *
                           std::pow(S, -r / p)),
                      p / (r - pth));
    rep.D3 = b0 * (q - p) / (p * q * th * p_pow);
    rep.D4 = (q * th + g - 1.0) / (q * th * (1.0 - g)) *
             std::pow(volume, 1.0 - (1.0 - g) / pstar) * std::pow(S, -(1.0 - g) / p);

    // Lambda3 extracted from the contradiction bound D2^((p theta-1+gamma)/p)
    // <= (D4/D3) lambda of the minus-branch positivity proof.
    const double lam3_candidate = rep.D3 * std::pow(rep.D2, (pth - 1.0 + g) / p) / rep.D4;
    rep.Lambda3 = std::min({rep.Lambda1, rep.Lambda2, lam3_candidate});

    rep.lambda_defaulted = !prm.lambda.has_value();
    rep.lambda = prm.lambda_or(rep.Lambda3 / 2.0);
    if (!(rep.lambda > 0.0)) throw std::invalid_argument("thresholds: lambda must be positive");

    const double hold = (r - 1.0 + g) * std::pow(volume, 1.0 - (1.0 - g) / pstar) *
                        std::pow(S, -(1.0 - g) / p);
    rep.A1 = std::pow(rep.lambda * p_pow * hold / (b0 * rpq), p / (pth - 1.0 + g));
    rep.A2 = std::pow(rep.lambda * std::pow(q, th - 1.0) * hold *
                          std::pow(rep.A1, (1.0 - g) / p) / (b0 * (r - q * th)),
                      1.0 / th);
    rep.D1 = rep.A1 + rep.A2;
    return rep;
}

}  // namespace kdp
