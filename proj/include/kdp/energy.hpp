#pragma once

#include <optional>
#include <vector>

#include "kdp/params.hpp"
#include "kdp/quadrature.hpp"

namespace kdp {

/// Which variational problem the energy refers to: the coupled form applies
/// the Kirchhoff coefficient to the combined gradient energy, the separated
/// form applies it to the p- and weighted q-energies individually.
enum class ProblemForm { coupled, separated };

/// phi_H applied to the gradient: Pp/p + Qq/q.
double phi_H(double Pp, double Qq, double p, double q);

/// Cached integrals of one shape plus (optionally) its located fibering roots.
struct FiberingProfile {
    FiberScalars s;
    std::optional<double> t1, tmax, t2;
};

/// Closed-form fibering family along the ray t -> t*u, built from the four
/// cached integrals only. All evaluations are O(1) and pure.
///
/// Coupled form (t > 0, with mphi = a0 + b0 phi^(theta-1)(t grad u)):
///   psi'(t)  = mphi (t^(p-1) Pp + t^(q-1) Qq) - lambda t^-gamma Is - t^(r-1) Ir
///   sigma(t) = mphi (t^(p-1+gamma) Pp + t^(q-1+gamma) Qq) - t^(r-1+gamma) Ir
///   psi'(t)  = t^-gamma (sigma(t) - lambda Is)
///   sigma'(t) = t^(r-2+gamma) (Tu(t) - (r-1+gamma) Ir), Tu strictly decreasing.
class FiberMap {
public:
    FiberMap(const ProblemParams& params, const FiberScalars& scalars, double lambda,
             ProblemForm form = ProblemForm::coupled);

    double psi(double t) const;     // t >= 0; psi(0) = 0
    double psi1(double t) const;    // t > 0
    double psi2(double t) const;    // t > 0
    double sigma(double t) const;   // t > 0
    double sigma1(double t) const;  // t > 0
    double Tu(double t) const;      // t > 0, strictly positive
    double Tu_target() const { return (prm_.r - 1.0 + prm_.gamma) * sc_.Ir; }

    double lambda() const { return lambda_; }
    const FiberScalars& scalars() const { return sc_; }
    const ProblemParams& params() const { return prm_; }
    ProblemForm form() const { return form_; }

private:
    void require_positive_t(double t, const char* what) const;
    void require_nonzero_shape(const char* what) const;
    double phi_at(double t) const;  // phi_H(t grad u)
    double m_at(double t) const;    // a0 + b0 phi^(theta-1)(t grad u)

    ProblemParams prm_;
    FiberScalars sc_;
    double lambda_ = 0.0;
    ProblemForm form_ = ProblemForm::coupled;
};

/// J_lambda(u) = M[phi_H(grad u)] - lambda/(1-gamma) Is - Ir/r.
/// Requires params.lambda to be set.
double energy_J(const GridFunction& u, const ProblemParams& params, const WeightField& w);

/// Separated energy: M(Pp)/p + M(Qq)/q - lambda/(1-gamma) Is - Ir/r.
double energy_J_separated(const GridFunction& u, const ProblemParams& params,
                          const WeightField& w);

/// Energy value from cached scalars without touching the mesh.
double energy_from_scalars(const ProblemParams& params, const FiberScalars& s, double lambda,
                           ProblemForm form);

struct FiberTabRow {
    double t, psi, psi1, psi2, sigma, sigma1, Tu;
};

std::vector<FiberTabRow> tabulate_fibering(const FiberMap& f, const std::vector<double>& tgrid);

}  // namespace kdp
