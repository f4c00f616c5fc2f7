#pragma once

// Singular spectrum analysis: split a series into additive components ordered
// by singular value, and form cumulative partial reconstructions.

#include <ssaid/core.hpp>

#include <cstddef>
#include <vector>

namespace ssaid::ssa {

struct SsaConfig {
    /// Embedding window W. Zero selects min(T / 2, 120).
    std::size_t window = 0;
    /// Number of components M; clipped to min(W, T - W + 1) when applied.
    std::size_t num_components = 100;
};

/// Window and component count after defaults and clipping for length T.
struct ResolvedSsa {
    std::size_t window;
    std::size_t num_components;
};

ResolvedSsa resolve(const SsaConfig& config, std::size_t length);

/// Components R^1..R^M, each of the input length. The last component holds
/// everything beyond rank M - 1, so the components always sum to the input.
struct Decomposition {
    std::vector<std::vector<double>> components;
    std::vector<double> singular_values;
    std::size_t original_length = 0;
    std::size_t window = 0;

    std::size_t size() const noexcept { return components.size(); }
};

Decomposition decompose(const TimeSeries& series, const SsaConfig& config = {});

/// Y^k = R^1 + ... + R^k on the grid of `like`. Requires 1 <= k <= M.
TimeSeries reconstruct_cumulative(const Decomposition& dec, std::size_t k, const TimeSeries& like);

/// All cumulative reconstructions Y^1..Y^M in one pass.
std::vector<std::vector<double>> cumulative_reconstructions(const Decomposition& dec);

} // namespace ssaid::ssa
