#include "kdp/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include <json.hpp>

#include "kdp/csv.hpp"
#include "kdp/shapes.hpp"

namespace kdp {

namespace {

using ordered_json = nlohmann::ordered_json;

void ensure_out_dir(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

ordered_json params_to_json(const ProblemParams& p) {
    ordered_json j;
    j["N"] = p.N;
    j["p"] = p.p;
    j["q"] = p.q;
    j["gamma"] = p.gamma;
    j["r"] = p.r;
    j["theta"] = p.theta;
    j["a0"] = p.a0;
    j["b0"] = p.b0;
    if (p.lambda)
        j["lambda"] = *p.lambda;
    else
        j["lambda"] = nullptr;
    return j;
}

ordered_json thresholds_to_json(const ThresholdReport& t) {
    ordered_json j;
    j["S"] = t.S;
    j["volume"] = t.volume;
    j["A"] = t.A;
    j["B"] = t.B;
    j["C"] = t.C;
    j["Lambda1"] = t.Lambda1;
    j["Lambda2"] = t.Lambda2;
    j["Lambda3"] = t.Lambda3;
    j["A1"] = t.A1;
    j["A2"] = t.A2;
    j["D1"] = t.D1;
    j["D2"] = t.D2;
    j["D3"] = t.D3;
    j["D4"] = t.D4;
    j["lambda"] = t.lambda;
    j["lambda_defaulted"] = t.lambda_defaulted;

    ordered_json prov;
    prov["estimator"] = "discrete Rayleigh quotient minimum (upper bound for S)";
    prov["mesh_nx"] = t.provenance.nx;
    prov["mesh_ny"] = t.provenance.ny;
    prov["p"] = t.provenance.p;
    prov["pstar"] = t.provenance.pstar;
    prov["restarts"] = t.provenance.restarts;
    prov["iterations"] = t.provenance.iterations;
    prov["best_restart"] = t.provenance.best_restart;
    prov["converged"] = t.provenance.converged;
    j["S_provenance"] = prov;
    return j;
}

ordered_json point_to_json(const NehariPoint& pt) {
    ordered_json j;
    j["branch"] = to_string(pt.branch);
    j["energy"] = pt.energy;
    j["psi2"] = pt.psi2;
    j["residual"] = pt.residual;
    j["scale_t"] = pt.scale_t;
    j["converged"] = pt.converged;
    j["iterations"] = pt.iterations;
    j["Pp"] = pt.scalars.Pp;
    j["Qq"] = pt.scalars.Qq;
    j["I_singular"] = pt.scalars.Is;
    j["I_r"] = pt.scalars.Ir;
    j["max_value"] = pt.w.max();

    double min_interior = std::numeric_limits<double>::infinity();
    const Mesh& m = pt.w.mesh();
    for (int n = 0; n < m.n_nodes(); ++n)
        if (!m.is_boundary(n)) min_interior = std::min(min_interior, pt.w[n]);
    j["min_interior_value"] = min_interior;
    return j;
}

ordered_json weight_to_json(const WeightSpec& w) {
    ordered_json j;
    j["kind"] = w.kind_name();
    j["value"] = w.value;
    if (w.kind == WeightSpec::Kind::indicator) {
        j["x0"] = w.x0;
        j["x1"] = w.x1;
        j["y0"] = w.y0;
        j["y1"] = w.y1;
    } else if (w.kind == WeightSpec::Kind::bump) {
        j["cx"] = w.cx;
        j["cy"] = w.cy;
        j["radius"] = w.radius;
    }
    return j;
}

std::string form_name(ProblemForm f) {
    return f == ProblemForm::coupled ? "coupled" : "separated";
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const ValidationReport rep = validate(cfg.params);
    out << rep.to_string();
    return rep.admissible ? kExitOk : kExitConfig;
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out) {
    const ValidationReport rep = validate(cfg.params);
    if (!rep.admissible) {
        out << rep.to_string();
        out << "thresholds require admissible parameters (override not honored)\n";
        return kExitConfig;
    }
    try {
        ensure_out_dir(cfg);
        const Mesh mesh(cfg.mesh.Lx, cfg.mesh.Ly, cfg.mesh.nx, cfg.mesh.ny);
        SobolevOptions sopts = cfg.solver.sobolev;
        sopts.seed = mix_seed(cfg.seed, 0x50b);
        const SobolevEstimate sob =
            sobolev_constant(mesh, cfg.params.p, critical_exponent(cfg.params.p, cfg.params.N), sopts);
        const ThresholdReport thr = thresholds(cfg.params, sob, mesh.total_area());

        const std::string path = out_path(cfg, "thresholds.json");
        write_text_file(path, thresholds_to_json(thr).dump(2) + "\n");
        out << "S = " << CsvWriter::format(thr.S) << "\n"
            << "Lambda1 = " << CsvWriter::format(thr.Lambda1) << "\n"
            << "Lambda2 = " << CsvWriter::format(thr.Lambda2) << "\n"
            << "Lambda3 = " << CsvWriter::format(thr.Lambda3) << "\n"
            << "report written to " << path << "\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        out << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        out << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_fiber(const RunConfig& cfg, const FiberOptions& opts, std::ostream& out) {
    const ValidationReport vrep = validate(cfg.params);
    if (!vrep.admissible && !cfg.allow_inadmissible) {
        out << vrep.to_string();
        return kExitConfig;
    }
    if (opts.t_steps < 2 || !(opts.t_min > 0.0) || !(opts.t_min < opts.t_max)) {
        out << "error: need 0 < t_min < t_max and t_steps >= 2\n";
        return kExitConfig;
    }

    try {
        ensure_out_dir(cfg);
        const Mesh mesh(cfg.mesh.Lx, cfg.mesh.Ly, cfg.mesh.nx, cfg.mesh.ny);
        const WeightField w(mesh, cfg.weight);

        ProblemParams prm = cfg.params;
        if (opts.lambda_override) prm.lambda = *opts.lambda_override;
        if (!prm.lambda) {
            if (!vrep.admissible) {
                out << "error: lambda unset and thresholds unavailable for inadmissible parameters\n";
                return kExitConfig;
            }
            SobolevOptions sopts = cfg.solver.sobolev;
            sopts.seed = mix_seed(cfg.seed, 0x50b);
            const SobolevEstimate sob =
                sobolev_constant(mesh, prm.p, critical_exponent(prm.p, prm.N), sopts);
            prm.lambda = thresholds(prm, sob, mesh.total_area()).lambda;
        }

        GridFunction shape = opts.shape == "random"
                                 ? random_unit_shape(mesh, w, prm.p, prm.q, mix_seed(cfg.seed, 1))
                                 : normalized_bump(mesh, w, prm.p, prm.q);
        if (opts.shape != "random" && opts.shape != "bump") {
            out << "error: unknown shape '" << opts.shape << "' (use bump or random)\n";
            return kExitConfig;
        }

        const FiberScalars sc = fiber_scalars(shape, w, prm.p, prm.q, prm.gamma, prm.r);
        const FiberMap f(prm, sc, prm.lambda_value(), ProblemForm::coupled);

        std::vector<double> grid(static_cast<std::size_t>(opts.t_steps));
        const double ratio = std::pow(opts.t_max / opts.t_min,
                                      1.0 / static_cast<double>(opts.t_steps - 1));
        double t = opts.t_min;
        for (int i = 0; i < opts.t_steps; ++i, t *= ratio)
            grid[static_cast<std::size_t>(i)] = t;

        CsvWriter csv({"t", "psi", "psi1", "psi2", "sigma", "sigma1", "Tu"});
        for (const FiberTabRow& rrow : tabulate_fibering(f, grid))
            csv.row({rrow.t, rrow.psi, rrow.psi1, rrow.psi2, rrow.sigma, rrow.sigma1, rrow.Tu});
        csv.write(out_path(cfg, "fiber.csv"));

        const double tmax = fiber_tmax(f);
        const auto roots = fiber_roots(f, tmax);

        ordered_json j;
        j["lambda"] = prm.lambda_value();
        j["shape"] = opts.shape;
        j["Pp"] = sc.Pp;
        j["Qq"] = sc.Qq;
        j["I_singular"] = sc.Is;
        j["I_r"] = sc.Ir;
        j["lambda_times_I_singular"] = prm.lambda_value() * sc.Is;
        j["tmax"] = tmax;
        j["sigma_tmax"] = f.sigma(tmax);
        if (roots) {
            j["t1"] = roots->t1;
            j["t2"] = roots->t2;
            j["sigma_t1"] = f.sigma(roots->t1);
            j["sigma_t2"] = f.sigma(roots->t2);
            out << "t1=" << CsvWriter::format(roots->t1) << " tmax=" << CsvWriter::format(tmax)
                << " t2=" << CsvWriter::format(roots->t2) << "\n";
        } else {
            j["t1"] = nullptr;
            j["t2"] = nullptr;
            out << "t1=none tmax=" << CsvWriter::format(tmax) << " t2=none\n";
        }
        write_text_file(out_path(cfg, "fiber_summary.json"), j.dump(2) + "\n");
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        out << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        out << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_solve(const RunConfig& cfg, const SolveCmdOptions& opts, std::ostream& out) {
    const ValidationReport vrep = validate(cfg.params);
    if (!vrep.admissible) {
        out << vrep.to_string();
        out << "solve requires admissible parameters\n";
        return kExitConfig;
    }
    try {
        ensure_out_dir(cfg);
        const Mesh mesh(cfg.mesh.Lx, cfg.mesh.Ly, cfg.mesh.nx, cfg.mesh.ny);
        const WeightField w(mesh, cfg.weight);

        ProblemParams prm = cfg.params;
        if (opts.lambda_override) prm.lambda = *opts.lambda_override;

        const SolveReport rep = solve(prm, w, cfg.solver, opts.form);

        ordered_json j;
        j["problem"] = form_name(rep.form);
        j["params"] = params_to_json(rep.params);
        j["weight"] = weight_to_json(cfg.weight);
        j["mesh"] = {{"Lx", mesh.Lx}, {"Ly", mesh.Ly}, {"nx", mesh.nx}, {"ny", mesh.ny}};
        j["seed"] = cfg.seed;
        j["thresholds"] = thresholds_to_json(rep.thresholds);
        j["u_plus"] = rep.plus ? point_to_json(*rep.plus) : ordered_json(nullptr);
        j["v_minus"] = rep.minus ? point_to_json(*rep.minus) : ordered_json(nullptr);
        j["partial"] = rep.partial;
        j["messages"] = rep.messages;
        write_text_file(out_path(cfg, "solve_report.json"), j.dump(2) + "\n");

        if (rep.plus) write_grid_csv(rep.plus->w, out_path(cfg, "u_plus.csv"));
        if (rep.minus) write_grid_csv(rep.minus->w, out_path(cfg, "v_minus.csv"));

        CsvWriter hist({"iter", "branch", "energy", "residual", "scale_t"});
        for (const IterationRecord& it : rep.history)
            hist.raw_row({std::to_string(it.iter), to_string(it.branch),
                          CsvWriter::format(it.energy), CsvWriter::format(it.residual),
                          CsvWriter::format(it.scale_t)});
        hist.write(out_path(cfg, "history.csv"));

        // Wall time is the one volatile output; it lives in a sidecar so the
        // reports and CSVs stay byte-reproducible.
        write_text_file(out_path(cfg, "timing.txt"),
                        "wall_seconds " + CsvWriter::format(rep.wall_seconds) + "\n");

        out << "J_plus = " << (rep.plus ? CsvWriter::format(rep.plus->energy) : "none")
            << "  J_minus = " << (rep.minus ? CsvWriter::format(rep.minus->energy) : "none")
            << "  lambda = " << CsvWriter::format(rep.thresholds.lambda) << "\n";
        for (const auto& msg : rep.messages) out << msg << "\n";
        if (rep.partial) {
            out << "partial solve\n";
            return kExitPartial;
        }
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        out << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        out << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_sweep(const RunConfig& cfg, const SweepOptions& opts, std::ostream& out) {
    const ValidationReport vrep = validate(cfg.params);
    if (!vrep.admissible) {
        out << vrep.to_string();
        out << "sweep requires admissible parameters\n";
        return kExitConfig;
    }
    if (!(opts.lambda_min > 0.0) || !(opts.lambda_min < opts.lambda_max) || opts.steps < 2) {
        out << "error: need 0 < lambda_min < lambda_max and steps >= 2\n";
        return kExitConfig;
    }

    try {
        ensure_out_dir(cfg);
        const Mesh mesh(cfg.mesh.Lx, cfg.mesh.Ly, cfg.mesh.nx, cfg.mesh.ny);
        const WeightField w(mesh, cfg.weight);

        std::vector<GridFunction> inits;
        inits.push_back(normalized_bump(mesh, w, cfg.params.p, cfg.params.q));
        for (int k = 0; k < cfg.solver.restarts; ++k)
            inits.push_back(
                random_unit_shape(mesh, w, cfg.params.p, cfg.params.q, mix_seed(cfg.seed, 7 + k)));

        CsvWriter csv({"lambda", "J_plus", "J_minus", "converged_plus", "converged_minus",
                       "Pp_plus", "Pp_minus"});
        const double ratio = std::pow(opts.lambda_max / opts.lambda_min,
                                      1.0 / static_cast<double>(opts.steps - 1));
        const double nan = std::numeric_limits<double>::quiet_NaN();

        double lam = opts.lambda_min;
        for (int row = 0; row < opts.steps; ++row, lam *= ratio) {
            ProblemParams prm = cfg.params;
            prm.lambda = lam;

            double J[2] = {nan, nan}, Pp[2] = {nan, nan};
            double conv[2] = {0.0, 0.0};
            for (int bi = 0; bi < 2; ++bi) {
                const Branch branch = bi == 0 ? Branch::plus : Branch::minus;
                std::optional<NehariPoint> best;
                for (const GridFunction& init : inits) {
                    try {
                        NehariPoint pt = minimize_branch(init, branch, prm, w, cfg.solver, opts.form);
                        if (!best || pt.energy < best->energy) best = std::move(pt);
                    } catch (const LambdaTooLargeError&) {
                        // recorded through the converged flag of this row
                    }
                }
                if (best) {
                    J[bi] = best->energy;
                    Pp[bi] = best->scalars.Pp;
                    conv[bi] = best->converged ? 1.0 : 0.0;
                }
            }
            csv.row({lam, J[0], J[1], conv[0], conv[1], Pp[0], Pp[1]});
        }
        csv.write(out_path(cfg, "sweep.csv"));
        out << "sweep written (" << opts.steps << " rows)\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        out << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        out << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace kdp
