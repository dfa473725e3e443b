#include "kdp/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kdp {

namespace {

using nlohmann::json;

double require_number(const json& block, const std::string& scope, const char* field) {
    if (!block.contains(field))
        throw ConfigError("missing field " + scope + "." + field);
    const auto& v = block.at(field);
    if (!v.is_number())
        throw ConfigError("field " + scope + "." + field + " must be a number");
    return v.get<double>();
}

double number_or(const json& block, const char* field, double fallback) {
    return block.contains(field) ? block.at(field).get<double>() : fallback;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    if (!doc.contains("params")) throw ConfigError("missing field params");
    const json& prm = doc.at("params");

    cfg.params.N = static_cast<int>(require_number(prm, "params", "N"));
    cfg.params.p = require_number(prm, "params", "p");
    cfg.params.q = require_number(prm, "params", "q");
    cfg.params.gamma = require_number(prm, "params", "gamma");
    cfg.params.r = require_number(prm, "params", "r");
    cfg.params.theta = require_number(prm, "params", "theta");
    cfg.params.a0 = require_number(prm, "params", "a0");
    cfg.params.b0 = require_number(prm, "params", "b0");
    if (prm.contains("lambda") && !prm.at("lambda").is_null())
        cfg.params.lambda = prm.at("lambda").get<double>();

    if (doc.contains("mesh")) {
        const json& m = doc.at("mesh");
        cfg.mesh.Lx = number_or(m, "Lx", cfg.mesh.Lx);
        cfg.mesh.Ly = number_or(m, "Ly", cfg.mesh.Ly);
        cfg.mesh.nx = static_cast<int>(number_or(m, "nx", cfg.mesh.nx));
        cfg.mesh.ny = static_cast<int>(number_or(m, "ny", cfg.mesh.ny));
    }

    if (doc.contains("weight")) {
        const json& w = doc.at("weight");
        if (!w.contains("kind")) throw ConfigError("missing field weight.kind");
        const std::string kind = w.at("kind").get<std::string>();
        if (kind == "constant") {
            cfg.weight.kind = WeightSpec::Kind::constant;
            cfg.weight.value = require_number(w, "weight", "value");
        } else if (kind == "indicator") {
            cfg.weight.kind = WeightSpec::Kind::indicator;
            cfg.weight.value = require_number(w, "weight", "value");
            cfg.weight.x0 = require_number(w, "weight", "x0");
            cfg.weight.x1 = require_number(w, "weight", "x1");
            cfg.weight.y0 = require_number(w, "weight", "y0");
            cfg.weight.y1 = require_number(w, "weight", "y1");
        } else if (kind == "bump") {
            cfg.weight.kind = WeightSpec::Kind::bump;
            cfg.weight.value = require_number(w, "weight", "value");
            cfg.weight.cx = require_number(w, "weight", "cx");
            cfg.weight.cy = require_number(w, "weight", "cy");
            cfg.weight.radius = require_number(w, "weight", "radius");
        } else {
            throw ConfigError("weight.kind must be constant, indicator or bump");
        }
    }

    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        cfg.solver.restarts = static_cast<int>(number_or(s, "restarts", cfg.solver.restarts));
        cfg.solver.max_iter = static_cast<long>(number_or(s, "max_iter", static_cast<double>(cfg.solver.max_iter)));
        cfg.solver.residual_tol = number_or(s, "residual_tol", cfg.solver.residual_tol);
        cfg.solver.stationarity_tol = number_or(s, "stationarity_tol", cfg.solver.stationarity_tol);
        cfg.solver.energy_stall_tol = number_or(s, "energy_stall_tol", cfg.solver.energy_stall_tol);
        cfg.solver.sobolev.restarts =
            static_cast<int>(number_or(s, "sobolev_restarts", cfg.solver.sobolev.restarts));
        cfg.solver.sobolev.max_iter =
            static_cast<int>(number_or(s, "sobolev_max_iter", cfg.solver.sobolev.max_iter));
    }

    if (doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.solver.seed = cfg.seed;
    if (doc.contains("allow_inadmissible"))
        cfg.allow_inadmissible = doc.at("allow_inadmissible").get<bool>();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace kdp
