#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "kdp/nehari.hpp"

namespace kdp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeshSpec {
    double Lx = 1.0, Ly = 1.0;
    int nx = 64, ny = 64;
};

/// Everything a batch run needs: problem data, discretization, weight spec,
/// solver options, output directory and the seed that fixes every randomized
/// choice.
struct RunConfig {
    ProblemParams params;
    MeshSpec mesh;
    WeightSpec weight{WeightSpec::Kind::constant, 1.0};
    SolveOptions solver;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool allow_inadmissible = false;
};

/// Loads the JSON configuration document. Parse failures and missing fields
/// throw ConfigError naming the offending field.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace kdp
