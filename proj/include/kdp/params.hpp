#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kdp {

/// Scalar data of the problem: exponents, Kirchhoff coefficients and the
/// parameter lambda. lambda may be left unset and resolved later from the
/// computed thresholds (default Lambda3/2).
struct ProblemParams {
    int N = 2;
    double p = 0.0;
    double q = 0.0;
    double gamma = 0.0;
    double r = 0.0;
    double theta = 1.0;
    double a0 = 0.0;
    double b0 = 0.0;
    std::optional<double> lambda;

    double lambda_value() const;          // throws if unset
    double lambda_or(double fallback) const;
};

/// p* = Np/(N-p). Throws std::domain_error unless 1 < p < N.
double critical_exponent(double p, int N);

struct ValidationCheck {
    std::string name;     // e.g. "q < p*"
    bool pass = false;
    std::string detail;   // evaluated numbers
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool admissible = false;

    const ValidationCheck* find(const std::string& name) const;
    std::string to_string() const;
};

/// Evaluates every inequality of the structural hypotheses one by one.
/// Never throws: failures are reported, not raised.
ValidationReport validate(const ProblemParams& params);

/// Throws std::invalid_argument listing the failed inequalities, unless the
/// report is admissible or allow_inadmissible is set.
void require_admissible(const ProblemParams& params, bool allow_inadmissible = false);

/// Kirchhoff coefficient m(t) = a0 + b0 t^(theta-1), t >= 0.
/// For theta == 1 the power is taken to be 1 also at t = 0, so m is the
/// constant a0 + b0 (continuity in theta).
double kirchhoff_m(double t, const ProblemParams& params);

/// Primitive M(t) = a0 t + (b0/theta) t^theta, t >= 0.
double kirchhoff_M(double t, const ProblemParams& params);

}  // namespace kdp
