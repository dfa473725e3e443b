#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdp/fibering.hpp"

namespace kdp {

enum class Branch { plus, minus };
std::string to_string(Branch b);

/// Projection failed because sigma(tmax) <= lambda * Is for the given shape.
struct LambdaTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point on one of the Nehari sub-manifolds: the scaled function together
/// with its membership data.
struct NehariPoint {
    GridFunction w;
    Branch branch;
    double energy = 0.0;
    double psi2 = 0.0;      // fibering second derivative at scale 1
    double residual = 0.0;  // relative nodal residual of the energy gradient
    double scale_t = 0.0;   // fibering root relative to the projected input
    bool converged = true;
    long iterations = 0;
    FiberScalars scalars;
};

struct SolveOptions {
    int restarts = 2;   // random positive initializers in addition to the bump
    long max_iter = 10000;
    double energy_stall_tol = 1e-10;
    int stall_iters = 5;
    double residual_tol = 1e-4;
    double stationarity_tol = 1e-8;
    std::uint64_t seed = 0;
    SobolevOptions sobolev;
};

struct IterationRecord {
    long iter = 0;
    Branch branch = Branch::plus;
    double energy = 0.0;
    double residual = 0.0;
    double scale_t = 0.0;
};

struct SolveReport {
    ProblemParams params;  // lambda resolved
    ProblemForm form = ProblemForm::coupled;
    ThresholdReport thresholds;
    std::optional<NehariPoint> plus;
    std::optional<NehariPoint> minus;
    std::vector<IterationRecord> history;  // best run per branch
    double wall_seconds = 0.0;
    bool partial = false;
    std::vector<std::string> messages;
};

/// Scales u onto the requested branch: t1*u for plus, t2*u for minus. The
/// input is normalized internally (fibering roots scale exactly inversely),
/// so scale_t always refers to the function passed in.
NehariPoint project(const GridFunction& u, Branch branch, const ProblemParams& params,
                    const WeightField& w, ProblemForm form = ProblemForm::coupled);

/// Nodal gradient of the energy at wpt >= 0: Kirchhoff-weighted operator
/// vectors minus the lumped singular and power terms, zero on the boundary.
/// The singular factor uses max(wpt, floor)^-gamma; the energy itself is
/// always evaluated unfloored.
GridFunction discrete_gradient(const GridFunction& wpt, const ProblemParams& params,
                               const WeightField& w, double floor,
                               ProblemForm form = ProblemForm::coupled);

/// Gradient plus the norms needed for the relative residual estimate and a
/// curvature model (positive diagonal surrogate plus the nonlocal Kirchhoff
/// rank-one terms) for preconditioned descent.
struct GradientAssembly {
    GridFunction g;
    std::vector<double> hdiag;
    double rank1_coeff[2] = {0.0, 0.0};
    std::vector<double> rank1_vec[2];
    double norm_g = 0.0;        // dual (1/hdiag-weighted) norm of the gradient
    double norm_parts = 0.0;    // sum of dual norms of the three constituents
    double energy_scale = 0.0;  // sum of magnitudes of the energy terms

    /// Relative Newton decrement sqrt(g^T H^-1 g / energy scale): the relative
    /// dual-norm estimate of the weak-form residual.
    double residual() const {
        return energy_scale > 0.0 ? norm_g / std::sqrt(energy_scale) : 0.0;
    }

    /// In-place solve with diag(hdiag) + sum_k coeff_k v_k v_k^T via
    /// Sherman-Morrison, applied once per rank-one term.
    void apply_seed_inverse(std::vector<double>& x) const;
};
GradientAssembly assemble_energy_gradient(const GridFunction& wpt, const ProblemParams& params,
                                          const WeightField& w, double floor,
                                          ProblemForm form = ProblemForm::coupled);

/// Fibering-projected descent on one branch: project, step against the
/// mass-preconditioned gradient with a backtracking line search, clamp
/// negative values, re-project. Stops when the relative energy change stays
/// below energy_stall_tol for stall_iters consecutive iterations.
NehariPoint minimize_branch(const GridFunction& u0, Branch branch, const ProblemParams& params,
                            const WeightField& w, const SolveOptions& opts,
                            ProblemForm form = ProblemForm::coupled,
                            std::vector<IterationRecord>* history = nullptr);

/// Full two-branch solve: Sobolev constant, thresholds, lambda resolution
/// (default Lambda3/2), both branches from the bump plus seeded restarts.
SolveReport solve(const ProblemParams& params, const WeightField& w, const SolveOptions& opts,
                  ProblemForm form = ProblemForm::coupled);

inline SolveReport solve_separated(const ProblemParams& params, const WeightField& w,
                                   const SolveOptions& opts) {
    return solve(params, w, opts, ProblemForm::separated);
}

}  // namespace kdp
