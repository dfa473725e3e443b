#pragma once

#include <vector>

#include "kdp/grid_function.hpp"
#include "kdp/mesh.hpp"
#include "kdp/weight_field.hpp"

namespace kdp {

struct GradientNorms {
    double Pp = 0.0;  // ||grad u||_p^p, exact per-element sum
    double Qq = 0.0;  // ||grad u||_{q,a}^q
};

/// The four integrals every fibering evaluation is built from.
struct FiberScalars {
    double Pp = 0.0;  // integral of |grad u|^p
    double Qq = 0.0;  // integral of a |grad u|^q
    double Is = 0.0;  // integral of |u|^(1-gamma), mass-lumped
    double Ir = 0.0;  // integral of |u|^r, mass-lumped
};

/// Exact element-wise gradient integrals of the P1 interpolant.
/// Requires p, q > 1 and u, w on the same mesh.
GradientNorms gradient_norms(const GridFunction& u, const WeightField& w, double p, double q);

/// Mass-lumped vertex quadrature of |u|^s, s > 0. |0|^s = 0 exactly.
double lp_integral(const GridFunction& u, double s);

/// One-pass computation of all four FiberScalars.
FiberScalars fiber_scalars(const GridFunction& u, const WeightField& w,
                           double p, double q, double gamma, double r);

/// Modular of the nodal values: sum of lumped * (|u|^p + a |u|^q).
double modular_nodal(const GridFunction& u, const WeightField& w, double p, double q);

/// Modular of the gradient field: equals Pp + Qq by construction.
double modular_gradient(const GridFunction& u, const WeightField& w, double p, double q);

/// Luxemburg norm from the two modular parts Mp = integral |v|^p and
/// Mq = integral a |v|^q: the unique tau with Mp tau^-p + Mq tau^-q = 1,
/// located by monotone bisection (bracket width <= 1e-12 * tau). Returns 0
/// when both parts vanish.
double luxemburg_from_parts(double Mp, double Mq, double p, double q);

double luxemburg_norm_nodal(const GridFunction& u, const WeightField& w, double p, double q);

/// Luxemburg norm of |grad u|: the norm of the zero-trace Musielak-Orlicz
/// Sobolev space.
double luxemburg_norm_gradient(const GridFunction& u, const WeightField& w, double p, double q);

/// Weak-form vectors of the double phase operator split by phase:
///   Ap[i] = sum_T area |grad u|^(p-2) grad u . grad phi_i
///   Aq[i] = sum_T area a_T |grad u|^(q-2) grad u . grad phi_i
/// Boundary rows are zero. Race-free gather over the node adjacency, so the
/// accumulation order is fixed and results are bit-stable in parallel.
struct OperatorVectors {
    std::vector<double> Ap;
    std::vector<double> Aq;
};
OperatorVectors assemble_operator_vectors(const GridFunction& u, const WeightField& w,
                                          double p, double q);

/// Fused element pass: operator vectors plus the gradient norms from the same
/// per-element data, and the diagonal stiffness surrogates
///   Dp[i] = sum_T area |grad u|^(p-2) |grad phi_i|^2   (Dq with the weight)
/// used for Jacobi preconditioning. One triangle sweep and one node gather.
struct AssemblyWithNorms {
    OperatorVectors ops;
    GradientNorms gn;
    std::vector<double> Dp;
    std::vector<double> Dq;
};
AssemblyWithNorms assemble_with_norms(const GridFunction& u, const WeightField& w,
                                      double p, double q);

/// Exact scaling of the cached integrals under u -> c*u, c > 0.
FiberScalars scale_scalars(const FiberScalars& s, double c, double p, double q, double gamma,
                           double r);

// ---------------------------------------------------------------------------
// Serial reference implementations. Same quadrature rules written as plain
// single-threaded loops; kept for testing the OpenMP kernels and as the
// baseline of the kernel benchmark.
// ---------------------------------------------------------------------------
namespace ref {

GradientNorms gradient_norms(const GridFunction& u, const WeightField& w, double p, double q);
double lp_integral(const GridFunction& u, double s);
FiberScalars fiber_scalars(const GridFunction& u, const WeightField& w,
                           double p, double q, double gamma, double r);
OperatorVectors assemble_operator_vectors(const GridFunction& u, const WeightField& w,
                                          double p, double q);

}  // namespace ref

}  // namespace kdp
