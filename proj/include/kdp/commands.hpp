#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "kdp/config.hpp"

namespace kdp {

// Exit-code contract: 0 success, 1 config/validation error, 2 partial solve,
// 3 internal numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitNumerical = 3;

struct FiberOptions {
    std::string shape = "bump";  // bump | random
    double t_min = 1e-3;
    double t_max = 1e3;
    int t_steps = 200;           // geometric grid
    std::optional<double> lambda_override;
};

struct SolveCmdOptions {
    ProblemForm form = ProblemForm::coupled;
    std::optional<double> lambda_override;
};

struct SweepOptions {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int steps = 0;
    ProblemForm form = ProblemForm::coupled;
};

int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_fiber(const RunConfig& cfg, const FiberOptions& opts, std::ostream& out);
int cmd_thresholds(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, const SolveCmdOptions& opts, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, const SweepOptions& opts, std::ostream& out);

}  // namespace kdp
