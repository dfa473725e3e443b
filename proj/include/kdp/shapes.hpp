#pragma once

#include <cstdint>

#include "kdp/grid_function.hpp"
#include "kdp/weight_field.hpp"

namespace kdp {

/// splitmix64 step; decorrelates derived seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

/// Tensor-product bump sin(pi x/Lx) sin(pi y/Ly); zero trace, positive inside.
GridFunction sine_bump(const Mesh& mesh);

/// sine_bump scaled to unit Luxemburg gradient norm.
GridFunction normalized_bump(const Mesh& mesh, const WeightField& w, double p, double q);

/// Deterministic positive random shape: a few Gaussian bumps plus low-level
/// noise, masked by the sine bump so the trace is zero and the interior is
/// strictly positive.
GridFunction random_positive_shape(const Mesh& mesh, std::uint64_t seed);

/// random_positive_shape scaled to unit Luxemburg gradient norm.
GridFunction random_unit_shape(const Mesh& mesh, const WeightField& w, double p, double q,
                               std::uint64_t seed);

}  // namespace kdp
