#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

namespace kdp::par {

// Reduction block size. Fixed blocking keeps the summation order independent
// of the OpenMP thread count: each block is accumulated left to right and the
// block partials are combined serially in block order, so results are
// bit-stable across runs and thread configurations.
inline constexpr std::ptrdiff_t kBlockSize = 1024;

/// Deterministic parallel sum of term(i) over i in [0, n) with K accumulators.
template <std::size_t K, class F>
std::array<double, K> block_sum(std::ptrdiff_t n, F&& term) {
    const std::ptrdiff_t nblocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<std::array<double, K>> partial(static_cast<std::size_t>(std::max<std::ptrdiff_t>(nblocks, 0)));

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
        std::array<double, K> acc{};
        const std::ptrdiff_t lo = b * kBlockSize;
        const std::ptrdiff_t hi = std::min(n, lo + kBlockSize);
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const std::array<double, K> t = term(i);
            for (std::size_t k = 0; k < K; ++k) acc[k] += t[k];
        }
        partial[static_cast<std::size_t>(b)] = acc;
    }

    std::array<double, K> total{};
    for (const auto& a : partial)
        for (std::size_t k = 0; k < K; ++k) total[k] += a[k];
    return total;
}

/// Single-accumulator convenience wrapper.
template <class F>
double block_sum1(std::ptrdiff_t n, F&& term) {
    return block_sum<1>(n, [&](std::ptrdiff_t i) { return std::array<double, 1>{term(i)}; })[0];
}

}  // namespace kdp::par
