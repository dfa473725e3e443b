#include "kdp/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kdp {

double ProblemParams::lambda_value() const {
    if (!lambda)
        throw std::logic_error("lambda is unset; resolve it (e.g. Lambda3/2) before use");
    return *lambda;
}

double ProblemParams::lambda_or(double fallback) const {
    return lambda ? *lambda : fallback;
}

double critical_exponent(double p, int N) {
    if (p <= 1.0)
        throw std::domain_error("critical exponent requires p > 1");
    if (p >= static_cast<double>(N))
        throw std::domain_error("critical exponent requires p < N");
    return static_cast<double>(N) * p / (static_cast<double>(N) - p);
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "  [ok]   " : "  [FAIL] ") << c.name << "   (" << c.detail << ")\n";
    os << (admissible ? "admissible" : "NOT admissible") << "\n";
    return os.str();
}

namespace {

ValidationCheck check(std::string name, bool pass, std::string detail) {
    return ValidationCheck{std::move(name), pass, std::move(detail)};
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

ValidationReport validate(const ProblemParams& prm) {
    ValidationReport rep;
    auto& cs = rep.checks;

    cs.push_back(check("N >= 2", prm.N >= 2, "N = " + std::to_string(prm.N)));
    cs.push_back(check("p > 1", prm.p > 1.0, "p = " + num(prm.p)));
    cs.push_back(check("p < N", prm.p < static_cast<double>(prm.N),
                       "p = " + num(prm.p) + ", N = " + std::to_string(prm.N)));

    const bool pstar_ok = prm.p > 1.0 && prm.p < static_cast<double>(prm.N) && prm.N >= 2;
    const double pstar = pstar_ok ? critical_exponent(prm.p, prm.N) : 0.0;
    const std::string pstar_str = pstar_ok ? num(pstar) : std::string("undefined");

    cs.push_back(check("q > p", prm.q > prm.p, "q = " + num(prm.q) + ", p = " + num(prm.p)));
    cs.push_back(check("q < p*", pstar_ok && prm.q < pstar,
                       "q = " + num(prm.q) + ", p* = " + pstar_str));
    cs.push_back(check("gamma > 0", prm.gamma > 0.0, "gamma = " + num(prm.gamma)));
    cs.push_back(check("gamma < 1", prm.gamma < 1.0, "gamma = " + num(prm.gamma)));
    cs.push_back(check("a0 >= 0", prm.a0 >= 0.0, "a0 = " + num(prm.a0)));
    cs.push_back(check("b0 > 0", prm.b0 > 0.0, "b0 = " + num(prm.b0)));
    cs.push_back(check("theta >= 1", prm.theta >= 1.0, "theta = " + num(prm.theta)));
    cs.push_back(check("theta < r/q", prm.q > 0.0 && prm.theta < prm.r / prm.q,
                       "theta = " + num(prm.theta) + ", r/q = " +
                           (prm.q > 0.0 ? num(prm.r / prm.q) : std::string("undefined"))));
    cs.push_back(check("r < p*", pstar_ok && prm.r < pstar,
                       "r = " + num(prm.r) + ", p* = " + pstar_str));
    if (prm.lambda)
        cs.push_back(check("lambda > 0", *prm.lambda > 0.0, "lambda = " + num(*prm.lambda)));
    else
        cs.push_back(check("lambda > 0", true, "lambda unset, resolved later from thresholds"));

    rep.admissible = true;
    for (const auto& c : cs) rep.admissible = rep.admissible && c.pass;
    return rep;
}

void require_admissible(const ProblemParams& params, bool allow_inadmissible) {
    const ValidationReport rep = validate(params);
    if (rep.admissible || allow_inadmissible) return;
    std::string failed;
    for (const auto& c : rep.checks)
        if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.name;
    throw std::invalid_argument("inadmissible parameters: " + failed);
}

double kirchhoff_m(double t, const ProblemParams& params) {
    if (t < 0.0) throw std::domain_error("kirchhoff_m: t must be >= 0");
    if (params.theta == 1.0) return params.a0 + params.b0;
    return params.a0 + params.b0 * std::pow(t, params.theta - 1.0);
}

double kirchhoff_M(double t, const ProblemParams& params) {
    if (t < 0.0) throw std::domain_error("kirchhoff_M: t must be >= 0");
    return params.a0 * t + params.b0 / params.theta * std::pow(t, params.theta);
}

}  // namespace kdp
