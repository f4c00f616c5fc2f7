#pragma once

// Sliding-window linear regression with AIC differencing: at each window
// centre compare one line over the whole window against independent lines
// over its two halves.

#include <ssaid/core.hpp>

#include <optional>
#include <vector>

namespace ssaid::baseline {

struct AicConfig {
    /// Even window length w in samples; halves of w / 2.
    std::size_t window = 14;
    /// Detection threshold zeta; centres with dAIC < zeta are flagged.
    double threshold = -5.0;

    void validate() const;
};

/// Entry t is AIC(two lines) - AIC(one line) for the window
/// [t - w/2, t + w/2 - 1]; the first and last w/2 entries are empty.
std::vector<std::optional<double>> delta_aic_series(const TimeSeries& series, const AicConfig& config);

/// One detection per maximal run of consecutive sub-threshold entries, at the
/// run's minimum (earliest on ties).
DetectionResult threshold_detect(const std::vector<std::optional<double>>& delta, double zeta);

} // namespace ssaid::baseline
