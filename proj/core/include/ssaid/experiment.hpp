#pragma once

// Monte Carlo evaluation harness: success-rate curves over a noise grid,
// suitable-noise-level (SNL) interval extraction, parameter sensitivity and
// null-threshold calibration.

#include <ssaid/baseline.hpp>
#include <ssaid/core.hpp>
#include <ssaid/ensemble.hpp>
#include <ssaid/isolate_detect.hpp>
#include <ssaid/simulate.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace ssaid::bench {

enum class Detector {
    id_direct,
    ssaid,
    ssaid_sliding,
    baseline,
};

using SignalSpec = std::variant<sim::SseSignalSpec, sim::FamilySpec>;

struct ExperimentConfig {
    SignalSpec signal = sim::SseSignalSpec{};
    std::vector<double> noise_grid;
    std::size_t seeds_per_level = 20; // xi
    Detector detector = Detector::ssaid;
    double v = 3.0;
    id::IdConfig id{};
    SsaidConfig ssaid = SsaidConfig::desk();
    std::size_t segment_len = 80;
    baseline::AicConfig aic{};
    std::uint64_t master_seed = 1;

    void validate() const;
};

struct TrialRecord {
    double level = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t detected_count = 0;
    std::optional<double> rmse; // only when the count is correct
    bool success = false;
};

struct LevelStats {
    double level = 0.0;
    double r_sd = 0.0;
    double r1 = 0.0;
    std::optional<double> mean_rmse_when_correct;
};

using Interval = std::pair<double, double>;

struct SnlReport {
    std::vector<LevelStats> per_level;
    std::optional<Interval> snl_interval;
    std::size_t seeds_per_level = 0;
    std::vector<TrialRecord> trials;
};

/// Correct count and RMSE strictly below v.
bool success(const DetectionResult& detection, const GroundTruth& truth, double v);

/// Noiseless signal with truth; family signals are z-score normalized here so
/// every signal enters the noise model on the same scale.
sim::Simulated make_signal(const SignalSpec& spec);

DetectionResult run_detector(const ExperimentConfig& config, const TimeSeries& series,
                             std::uint64_t seed);

/// Longest contiguous run of levels with r_sd >= 0.5 (earliest on ties).
std::optional<Interval> snl_interval(const std::vector<LevelStats>& levels);

SnlReport run_sweep(const ExperimentConfig& config);

enum class SweepParam {
    Q,
    L,
};

struct SensitivityReport {
    SweepParam param = SweepParam::Q;
    std::vector<std::pair<std::size_t, SnlReport>> reports;
    /// sup-norm of the r_sd difference between consecutive parameter values.
    std::vector<double> consecutive_max_diff;
};

SensitivityReport sensitivity_sweep(SweepParam param, const std::vector<std::size_t>& values,
                                    const ExperimentConfig& base);

double max_abs_rsd_difference(const SnlReport& a, const SnlReport& b);

struct CalibrationRow {
    double threshold_const = 0.0;
    double false_positive_rate = 0.0;
};

/// Fraction of pure-noise series of the given length on which
/// Isolate-Detect reports at least one change-point, per threshold constant.
std::vector<CalibrationRow> calibrate_threshold(const std::vector<double>& constants,
                                                std::size_t length, std::size_t seeds,
                                                std::uint64_t master_seed,
                                                const id::IdConfig& base = {});

} // namespace ssaid::bench
