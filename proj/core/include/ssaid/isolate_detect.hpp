#pragma once

// Isolate-Detect for continuous piecewise-linear signals.
//
// Candidate knots are examined inside intervals that grow from the left and
// right ends of the current segment in steps of `expansion_step`. The first
// interval whose largest slope contrast exceeds
//
//     zeta_T = C * sigma * sqrt(2 log T)
//
// isolates one change-point at its arg-max; the segment is split there and
// both halves are searched again. Knot positions b are admissible on [s, e]
// when each side, knot included, has at least `min_gap` samples.

#include <ssaid/core.hpp>

#include <optional>
#include <span>
#include <vector>

namespace ssaid::id {

struct IdConfig {
    double threshold_const = 1.3;
    Index expansion_step = 10;
    Index min_gap = 3;
    /// Noise scale override; estimated from the series when empty.
    std::optional<double> sigma;

    void validate() const;
};

/// Robust white-noise scale from the MAD of second differences. Second
/// differencing removes any linear trend; Var(diff2 eps) = 6 sigma^2.
double estimate_sigma(std::span<const double> x);
double estimate_sigma(const TimeSeries& series);

/// sqrt(RSS_line - RSS_knot) on [s, e] with a single continuous knot at b.
/// Evaluated in O(1) per (s, e, b) from prefix sums.
class SlopeContrast {
public:
    explicit SlopeContrast(std::span<const double> x);

    std::size_t size() const noexcept { return n_; }

    /// Squared contrast; no geometry checks.
    double squared(Index s, Index e, Index b) const noexcept;

    struct Peak {
        Index location = -1;
        double squared = 0.0;
    };

    /// Largest squared contrast over admissible b in [s, e]; smallest index
    /// wins ties. `location` is -1 when no knot is admissible.
    Peak peak(Index s, Index e, Index min_gap) const noexcept;

    /// As peak(), but returns an empty Peak without locating the maximum
    /// when no squared contrast exceeds `floor`.
    Peak peak_above(Index s, Index e, Index min_gap, double floor) const noexcept;

private:
    std::size_t n_;
    std::vector<double> p0_; // prefix sums of x
    std::vector<double> p1_; // prefix sums of t * x
};

double slope_contrast(const TimeSeries& series, Index s, Index e, Index b,
                      Index min_gap = IdConfig{}.min_gap);

/// Threshold applied to contrasts for a series of this length and scale.
double detection_threshold(std::size_t length, double sigma, double threshold_const);

DetectionResult detect(std::span<const double> x, const IdConfig& config = {});
DetectionResult detect(const TimeSeries& series, const IdConfig& config = {});

} // namespace ssaid::id
