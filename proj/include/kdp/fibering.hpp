#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "kdp/energy.hpp"

namespace kdp {

/// Thrown when a geometric bracket expansion hits its cap; signals degenerate
/// inputs rather than hanging.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unique maximizer of sigma: the root of Tu(t) = (r-1+gamma) Ir, found by
/// bisection on the strictly decreasing Tu after geometric bracket expansion
/// from t = 1 (at most 200 doublings each way).
double fiber_tmax(const FiberMap& f);

/// Lower bound t0 for tmax:
///   (1/||grad u||_p) * [ b0 (p-1+gamma) S^(r/p)
///                        / (p^(theta-1) (r-1+gamma) |Omega|^(1-r/p*)) ]^(1/(r-p theta))
double t_lower_bound(const ProblemParams& params, const FiberScalars& s, double S,
                     double volume);

struct FiberRoots {
    double t1 = 0.0;
    double t2 = 0.0;
};

/// Solves sigma(t) = lambda * Is on both monotone branches around tmax.
/// Returns nothing when sigma(tmax) <= lambda * Is (lambda too large for this
/// shape). Residuals of both roots are <= 1e-10 * max(1, lambda * Is).
std::optional<FiberRoots> fiber_roots(const FiberMap& f, double tmax);

enum class NehariClass { Nplus, Nminus, Nzero, NotOnNehari };
std::string to_string(NehariClass c);

/// Membership test at scale 1 with an energy-normalized dead band:
/// NotOnNehari when |psi'(1)| exceeds tol * scale, otherwise branch by the
/// sign of psi''(1), with Nzero inside the dead band.
NehariClass classify(const GridFunction& u, const ProblemParams& params, const WeightField& w,
                     double tol_stationarity, ProblemForm form = ProblemForm::coupled);

// ---------------------------------------------------------------------------
// Sobolev constant
// ---------------------------------------------------------------------------

struct SobolevOptions {
    int restarts = 50;
    int max_iter = 400;
    double quotient_tol = 1e-8;  // stop when the relative quotient drop falls below
    std::uint64_t seed = 0;
};

struct SobolevEstimate {
    double S = 0.0;        // best discrete Rayleigh quotient (upper bound for S)
    int restarts = 0;
    long iterations = 0;   // total descent iterations over all restarts
    int best_restart = -1;
    bool converged = false;
    int nx = 0, ny = 0;
    double p = 0.0, pstar = 0.0;
};

/// Minimizes ||grad u||_p^p / ||u||_p*^p over the discrete zero-trace space by
/// normalized gradient descent from seeded random positive bumps. The discrete
/// minimum over a subspace is an upper bound for the continuum constant.
/// Throws if no restart reduces the quotient below its starting value.
SobolevEstimate sobolev_constant(const Mesh& mesh, double p, double pstar,
                                 const SobolevOptions& opts);

// ---------------------------------------------------------------------------
// Threshold constants
// ---------------------------------------------------------------------------

struct ThresholdReport {
    double S = 0.0;
    double volume = 0.0;
    double A = 0.0, B = 0.0, C = 0.0;
    double Lambda1 = 0.0, Lambda2 = 0.0, Lambda3 = 0.0;
    double A1 = 0.0, A2 = 0.0, D1 = 0.0;  // N+ gap constants (lambda-dependent)
    double D2 = 0.0, D3 = 0.0, D4 = 0.0;
    double lambda = 0.0;
    bool lambda_defaulted = false;  // true when lambda was resolved to Lambda3/2
    SobolevEstimate provenance;
};

/// Evaluates every closed-form constant. Requires admissible params; the
/// override flag is deliberately not honored here. When params.lambda is
/// unset, lambda = Lambda3/2 is used for the lambda-dependent constants.
ThresholdReport thresholds(const ProblemParams& params, const SobolevEstimate& sobolev,
                           double volume);

}  // namespace kdp
