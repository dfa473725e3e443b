#include "kdp/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace kdp {

double phi_H(double Pp, double Qq, double p, double q) {
    if (Pp < 0.0 || Qq < 0.0)
        throw std::invalid_argument("phi_H: gradient integrals must be >= 0");
    return Pp / p + Qq / q;
}

FiberMap::FiberMap(const ProblemParams& params, const FiberScalars& scalars, double lambda,
                   ProblemForm form)
    : prm_(params), sc_(scalars), lambda_(lambda), form_(form) {
    if (sc_.Pp < 0.0 || sc_.Qq < 0.0 || sc_.Is < 0.0 || sc_.Ir < 0.0)
        throw std::invalid_argument("FiberMap: negative cached integral");
    if (lambda_ <= 0.0) throw std::invalid_argument("FiberMap: lambda must be > 0");
}

void FiberMap::require_positive_t(double t, const char* what) const {
    if (!(t > 0.0)) throw std::domain_error(std::string(what) + ": requires t > 0");
}

void FiberMap::require_nonzero_shape(const char* what) const {
    if (sc_.Pp == 0.0 && sc_.Qq == 0.0 && sc_.Is == 0.0 && sc_.Ir == 0.0)
        throw std::domain_error(std::string(what) + ": requires a nonzero shape");
}

double FiberMap::phi_at(double t) const {
    return std::pow(t, prm_.p) * sc_.Pp / prm_.p + std::pow(t, prm_.q) * sc_.Qq / prm_.q;
}

double FiberMap::m_at(double t) const {
    if (prm_.theta == 1.0) return prm_.a0 + prm_.b0;
    return prm_.a0 + prm_.b0 * std::pow(phi_at(t), prm_.theta - 1.0);
}

double FiberMap::psi(double t) const {
    if (t < 0.0) throw std::domain_error("psi: requires t >= 0");
    if (t == 0.0) return 0.0;
    const double lower = lambda_ * std::pow(t, 1.0 - prm_.gamma) / (1.0 - prm_.gamma) * sc_.Is +
                         std::pow(t, prm_.r) / prm_.r * sc_.Ir;
    if (form_ == ProblemForm::coupled) {
        const double phi = phi_at(t);
        return prm_.a0 * phi + prm_.b0 / prm_.theta * std::pow(phi, prm_.theta) - lower;
    }
    const double ps = std::pow(t, prm_.p) * sc_.Pp;
    const double qs = std::pow(t, prm_.q) * sc_.Qq;
    return prm_.a0 * (ps / prm_.p + qs / prm_.q) +
           prm_.b0 / prm_.theta *
               (std::pow(ps, prm_.theta) / prm_.p + std::pow(qs, prm_.theta) / prm_.q) -
           lower;
}

double FiberMap::psi1(double t) const {
    require_positive_t(t, "psi1");
    require_nonzero_shape("psi1");
    const double lower = lambda_ * std::pow(t, -prm_.gamma) * sc_.Is +
                         std::pow(t, prm_.r - 1.0) * sc_.Ir;
    if (form_ == ProblemForm::coupled)
        return m_at(t) * (std::pow(t, prm_.p - 1.0) * sc_.Pp +
                          std::pow(t, prm_.q - 1.0) * sc_.Qq) -
               lower;
    const double pt = prm_.p * prm_.theta, qt = prm_.q * prm_.theta;
    return prm_.a0 *
               (std::pow(t, prm_.p - 1.0) * sc_.Pp + std::pow(t, prm_.q - 1.0) * sc_.Qq) +
           prm_.b0 * (std::pow(t, pt - 1.0) * std::pow(sc_.Pp, prm_.theta) +
                      std::pow(t, qt - 1.0) * std::pow(sc_.Qq, prm_.theta)) -
           lower;
}

double FiberMap::psi2(double t) const {
    require_positive_t(t, "psi2");
    require_nonzero_shape("psi2");
    const double p = prm_.p, q = prm_.q, r = prm_.r, g = prm_.gamma, th = prm_.theta;
    const double lower = -lambda_ * g * std::pow(t, -g - 1.0) * sc_.Is +
                         (r - 1.0) * std::pow(t, r - 2.0) * sc_.Ir;
    if (form_ == ProblemForm::coupled) {
        double out = m_at(t) * ((p - 1.0) * std::pow(t, p - 2.0) * sc_.Pp +
                                (q - 1.0) * std::pow(t, q - 2.0) * sc_.Qq);
        if (th != 1.0) {
            const double flux = std::pow(t, p - 1.0) * sc_.Pp + std::pow(t, q - 1.0) * sc_.Qq;
            out += prm_.b0 * (th - 1.0) * std::pow(phi_at(t), th - 2.0) * flux * flux;
        }
        return out - lower;
    }
    const double pt = p * th, qt = q * th;
    return prm_.a0 * ((p - 1.0) * std::pow(t, p - 2.0) * sc_.Pp +
                      (q - 1.0) * std::pow(t, q - 2.0) * sc_.Qq) +
           prm_.b0 * ((pt - 1.0) * std::pow(t, pt - 2.0) * std::pow(sc_.Pp, th) +
                      (qt - 1.0) * std::pow(t, qt - 2.0) * std::pow(sc_.Qq, th)) -
           lower;
}

double FiberMap::sigma(double t) const {
    require_positive_t(t, "sigma");
    require_nonzero_shape("sigma");
    const double p = prm_.p, q = prm_.q, r = prm_.r, g = prm_.gamma, th = prm_.theta;
    const double power = std::pow(t, r - 1.0 + g) * sc_.Ir;
    if (form_ == ProblemForm::coupled)
        return m_at(t) * (std::pow(t, p - 1.0 + g) * sc_.Pp +
                          std::pow(t, q - 1.0 + g) * sc_.Qq) -
               power;
    const double pt = p * th, qt = q * th;
    return prm_.a0 * (std::pow(t, p - 1.0 + g) * sc_.Pp + std::pow(t, q - 1.0 + g) * sc_.Qq) +
           prm_.b0 * (std::pow(t, pt - 1.0 + g) * std::pow(sc_.Pp, th) +
                      std::pow(t, qt - 1.0 + g) * std::pow(sc_.Qq, th)) -
           power;
}

double FiberMap::sigma1(double t) const {
    require_positive_t(t, "sigma1");
    require_nonzero_shape("sigma1");
    const double p = prm_.p, q = prm_.q, r = prm_.r, g = prm_.gamma, th = prm_.theta;
    const double power = (r - 1.0 + g) * std::pow(t, r - 2.0 + g) * sc_.Ir;
    if (form_ == ProblemForm::coupled) {
        double out = m_at(t) * ((p - 1.0 + g) * std::pow(t, p - 2.0 + g) * sc_.Pp +
                                (q - 1.0 + g) * std::pow(t, q - 2.0 + g) * sc_.Qq);
        if (th != 1.0) {
            const double flux_g = std::pow(t, p - 1.0 + g) * sc_.Pp +
                                  std::pow(t, q - 1.0 + g) * sc_.Qq;
            const double flux = std::pow(t, p - 1.0) * sc_.Pp + std::pow(t, q - 1.0) * sc_.Qq;
            out += prm_.b0 * (th - 1.0) * std::pow(phi_at(t), th - 2.0) * flux_g * flux;
        }
        return out - power;
    }
    const double pt = p * th, qt = q * th;
    return prm_.a0 * ((p - 1.0 + g) * std::pow(t, p - 2.0 + g) * sc_.Pp +
                      (q - 1.0 + g) * std::pow(t, q - 2.0 + g) * sc_.Qq) +
           prm_.b0 * ((pt - 1.0 + g) * std::pow(t, pt - 2.0 + g) * std::pow(sc_.Pp, th) +
                      (qt - 1.0 + g) * std::pow(t, qt - 2.0 + g) * std::pow(sc_.Qq, th)) -
           power;
}

double FiberMap::Tu(double t) const {
    require_positive_t(t, "Tu");
    require_nonzero_shape("Tu");
    const double p = prm_.p, q = prm_.q, r = prm_.r, g = prm_.gamma, th = prm_.theta;
    if (form_ == ProblemForm::coupled) {
        double out = m_at(t) * ((p - 1.0 + g) * std::pow(t, p - r) * sc_.Pp +
                                (q - 1.0 + g) * std::pow(t, q - r) * sc_.Qq);
        if (th != 1.0) {
            const double shifted = std::pow(t, p - r + 1.0) * sc_.Pp +
                                   std::pow(t, q - r + 1.0) * sc_.Qq;
            const double flux = std::pow(t, p - 1.0) * sc_.Pp + std::pow(t, q - 1.0) * sc_.Qq;
            out += prm_.b0 * (th - 1.0) * std::pow(phi_at(t), th - 2.0) * shifted * flux;
        }
        return out;
    }
    const double pt = p * th, qt = q * th;
    return prm_.a0 * ((p - 1.0 + g) * std::pow(t, p - r) * sc_.Pp +
                      (q - 1.0 + g) * std::pow(t, q - r) * sc_.Qq) +
           prm_.b0 * ((pt - 1.0 + g) * std::pow(t, pt - r) * std::pow(sc_.Pp, th) +
                      (qt - 1.0 + g) * std::pow(t, qt - r) * std::pow(sc_.Qq, th));
}

double energy_from_scalars(const ProblemParams& params, const FiberScalars& s, double lambda,
                           ProblemForm form) {
    const double lower = lambda / (1.0 - params.gamma) * s.Is + s.Ir / params.r;
    if (form == ProblemForm::coupled)
        return kirchhoff_M(phi_H(s.Pp, s.Qq, params.p, params.q), params) - lower;
    return kirchhoff_M(s.Pp, params) / params.p + kirchhoff_M(s.Qq, params) / params.q - lower;
}

double energy_J(const GridFunction& u, const ProblemParams& params, const WeightField& w) {
    const FiberScalars s = fiber_scalars(u, w, params.p, params.q, params.gamma, params.r);
    return energy_from_scalars(params, s, params.lambda_value(), ProblemForm::coupled);
}

double energy_J_separated(const GridFunction& u, const ProblemParams& params,
                          const WeightField& w) {
    const FiberScalars s = fiber_scalars(u, w, params.p, params.q, params.gamma, params.r);
    return energy_from_scalars(params, s, params.lambda_value(), ProblemForm::separated);
}

std::vector<FiberTabRow> tabulate_fibering(const FiberMap& f, const std::vector<double>& tgrid) {
    std::vector<FiberTabRow> rows;
    rows.reserve(tgrid.size());
    for (double t : tgrid)
        rows.push_back(FiberTabRow{t, f.psi(t), f.psi1(t), f.psi2(t), f.sigma(t), f.sigma1(t),
                                   f.Tu(t)});
    return rows;
}

}  // namespace kdp
