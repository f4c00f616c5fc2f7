#pragma once

// The SSAID pipeline: SSA cumulative reconstructions Y^k, noise injection at
// L levels with Q realizations each, per-group majority voting, in-SNL group
// identification and final aggregation. Also the sliding-window variant.

#include <ssaid/core.hpp>
#include <ssaid/isolate_detect.hpp>
#include <ssaid/ssa.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssaid {

struct SsaidConfig {
    ssa::SsaConfig ssa{};
    std::size_t noise_levels = 80;   // L
    std::size_t realizations = 50;   // Q
    double rmse_threshold = 3.0;     // v, in samples
    double noise_max_factor = 2.0;   // top of the a_s grid, in input std units
    std::uint64_t seed = 0;
    id::IdConfig id{};

    void validate() const;

    /// M = 100, L = 80, Q = 50.
    static SsaidConfig paper();
    /// M = 20, L = 20, Q = 30.
    static SsaidConfig desk();
};

/// Per-(k, s) ensemble diagnostics.
struct GroupStats {
    std::size_t k = 0;      // 1-based component count of Y^k
    std::size_t s = 0;      // 1-based noise level index
    double a_s = 0.0;
    Index h_mode = 0;       // mode of member change-point counts
    double r2 = 0.0;        // kappa / Q
    std::size_t kappa = 0;  // qualified members
    std::optional<double> omega3;
    std::vector<Index> locations; // column modes U
    bool degenerate = false;      // column modes collided
    std::size_t window = 0;       // sliding window index, 0 otherwise
};

struct SsaidResult {
    DetectionResult detection;
    std::vector<GroupStats> in_snl_groups;
    std::vector<GroupStats> all_groups;
    SsaidConfig config_echo;
    std::vector<std::string> warnings;
};

/// a_s = (s / L) * factor * std for s = 1..L.
std::vector<double> noise_grid(double series_std, std::size_t levels, double factor);

/// Noise source for the members of one (k, s) group. Member m of the group
/// draws from the stream keyed by (seed, k, s, m), independent of execution
/// order.
struct NoiseStream {
    std::uint64_t seed = 0;
    std::uint64_t k = 0;
    std::uint64_t s = 0;

    void fill(std::uint64_t member, std::span<double> out) const;
};

/// Runs Isolate-Detect on q noisy copies y + a_s * w^m and summarizes the
/// group by majority voting.
GroupStats run_group(const TimeSeries& y, double a_s, std::size_t q, const NoiseStream& noise,
                     const id::IdConfig& id_cfg);

/// P(F >= ceil(q/2)) for F ~ Binomial(q, p_s).
double voting_success_prob(double p_s, std::size_t q);

/// Groups with r2 >= 0.5, h_mode != 0, omega3 <= v, and no collisions.
std::vector<GroupStats> identify_in_snl(const std::vector<GroupStats>& groups, double v);

struct Aggregate {
    DetectionResult detection;
    bool collided = false;
};

/// Majority count over groups, then column-wise modes among the groups with
/// that count. Order-invariant.
Aggregate aggregate(const std::vector<GroupStats>& in_snl);

SsaidResult detect(const TimeSeries& series, const SsaidConfig& config);

/// Windows of three consecutive segments of length `segment_len`, sliding by
/// one segment; detections are merged across windows.
SsaidResult detect_sliding(const TimeSeries& series, const SsaidConfig& config,
                           std::size_t segment_len);

/// Window bounds [first, first + length) used by detect_sliding.
struct WindowSpan {
    std::size_t first;
    std::size_t length;
};
std::vector<WindowSpan> sliding_windows(std::size_t length, std::size_t segment_len);

} // namespace ssaid
