// kdp — batch front door for the double phase Kirchhoff solver.
// Subcommands: validate, fiber, thresholds, solve, sweep.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kdp/commands.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    bool allow_inadmissible = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_lambda = true) {
    cmd->add_option("--config", f.config_path, "configuration file (JSON)")->required();
    auto* out = cmd->add_option_function<std::string>(
        "--out", [&f](const std::string& s) { f.out_dir = s; }, "output directory");
    out->expected(1);
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&f](std::uint64_t s) { f.seed = s; }, "RNG seed override");
    if (with_lambda)
        cmd->add_option_function<double>(
            "--lambda", [&f](double x) { f.lambda = x; }, "lambda override");
    cmd->add_flag("--allow-inadmissible", f.allow_inadmissible,
                  "run exploratory commands on inadmissible parameters");
}

kdp::RunConfig load_with_flags(const CommonFlags& f) {
    kdp::RunConfig cfg = kdp::load_config(f.config_path);
    if (f.out_dir) cfg.out_dir = *f.out_dir;
    if (f.seed) {
        cfg.seed = *f.seed;
        cfg.solver.seed = *f.seed;
    }
    if (f.allow_inadmissible) cfg.allow_inadmissible = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"double phase Kirchhoff singular problem solver"};
    app.require_subcommand(1);

    CommonFlags fv, ff, ft, fs, fw;

    auto* validate = app.add_subcommand("validate", "check the structural hypotheses");
    add_common(validate, fv, false);

    auto* fiber = app.add_subcommand("fiber", "tabulate the fibering functions of one shape");
    add_common(fiber, ff);
    kdp::FiberOptions fopts;
    fiber->add_option("--shape", fopts.shape, "initializer: bump or random");
    fiber->add_option("--t-min", fopts.t_min, "grid start (geometric)");
    fiber->add_option("--t-max", fopts.t_max, "grid end");
    fiber->add_option("--t-steps", fopts.t_steps, "grid size");

    auto* thresholdsc = app.add_subcommand("thresholds", "compute S and the threshold constants");
    add_common(thresholdsc, ft, false);

    auto* solve = app.add_subcommand("solve", "compute the two-branch solution pair");
    add_common(solve, fs);
    std::string problem = "coupled";
    solve->add_option("--problem", problem, "coupled or separated");

    auto* sweep = app.add_subcommand("sweep", "solve across a geometric lambda range");
    add_common(sweep, fw, false);
    kdp::SweepOptions wopts;
    sweep->add_option("--lambda-min", wopts.lambda_min, "smallest lambda")->required();
    sweep->add_option("--lambda-max", wopts.lambda_max, "largest lambda")->required();
    sweep->add_option("--steps", wopts.steps, "number of rows")->required();
    std::string sweep_problem = "coupled";
    sweep->add_option("--problem", sweep_problem, "coupled or separated");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return kdp::cmd_validate(load_with_flags(fv), std::cout);
        if (fiber->parsed()) {
            fopts.lambda_override = ff.lambda;
            return kdp::cmd_fiber(load_with_flags(ff), fopts, std::cout);
        }
        if (thresholdsc->parsed()) return kdp::cmd_thresholds(load_with_flags(ft), std::cout);
        if (solve->parsed()) {
            kdp::SolveCmdOptions sopts;
            if (problem != "coupled" && problem != "separated") {
                std::cout << "error: --problem must be coupled or separated\n";
                return kdp::kExitConfig;
            }
            sopts.form = problem == "separated" ? kdp::ProblemForm::separated
                                                : kdp::ProblemForm::coupled;
            sopts.lambda_override = fs.lambda;
            return kdp::cmd_solve(load_with_flags(fs), sopts, std::cout);
        }
        if (sweep->parsed()) {
            if (sweep_problem != "coupled" && sweep_problem != "separated") {
                std::cout << "error: --problem must be coupled or separated\n";
                return kdp::kExitConfig;
            }
            wopts.form = sweep_problem == "separated" ? kdp::ProblemForm::separated
                                                      : kdp::ProblemForm::coupled;
            return kdp::cmd_sweep(load_with_flags(fw), wopts, std::cout);
        }
    } catch (const kdp::ConfigError& e) {
        std::cout << "config error: " << e.what() << "\n";
        return kdp::kExitConfig;
    } catch (const std::exception& e) {
        std::cout << "numerical failure: " << e.what() << "\n";
        return kdp::kExitNumerical;
    }
    return kdp::kExitConfig;
}
