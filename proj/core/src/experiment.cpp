#include <ssaid/experiment.hpp>

#include <ssaid/random.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

namespace ssaid::bench {

void ExperimentConfig::validate() const {
    if (seeds_per_level < 1) {
        throw Error(ErrorKind::precondition, "seeds_per_level must be at least 1");
    }
    if (noise_grid.empty()) {
        throw Error(ErrorKind::precondition, "noise grid must not be empty");
    }
    if (!std::is_sorted(noise_grid.begin(), noise_grid.end())) {
        throw Error(ErrorKind::precondition, "noise grid must be sorted ascending");
    }
    for (double level : noise_grid) {
        if (!(level >= 0.0)) {
            throw Error(ErrorKind::precondition, "noise levels must be non-negative");
        }
    }
    if (!(v > 0.0)) {
        throw Error(ErrorKind::precondition, "success threshold v must be positive");
    }
    id.validate();
    ssaid.validate();
    if (detector == Detector::baseline) {
        aic.validate();
    }
}

bool success(const DetectionResult& detection, const GroundTruth& truth, double v) {
    return detection.count() == truth.count() && rmse(detection, truth) < v;
}

sim::Simulated make_signal(const SignalSpec& spec) {
    if (const auto* sse = std::get_if<sim::SseSignalSpec>(&spec)) {
        return sim::generate_sse_like(*sse);
    }
    auto raw = sim::generate_family(std::get<sim::FamilySpec>(spec));
    return {zscore_normalize(raw.signal), std::move(raw.truth)};
}

DetectionResult run_detector(const ExperimentConfig& config, const TimeSeries& series,
                             std::uint64_t seed) {
    switch (config.detector) {
    case Detector::id_direct:
        return id::detect(series, config.id);
    case Detector::ssaid: {
        auto cfg = config.ssaid;
        cfg.seed = seed;
        return detect(series, cfg).detection;
    }
    case Detector::ssaid_sliding: {
        auto cfg = config.ssaid;
        cfg.seed = seed;
        return detect_sliding(series, cfg, config.segment_len).detection;
    }
    case Detector::baseline:
        return baseline::threshold_detect(baseline::delta_aic_series(series, config.aic),
                                          config.aic.threshold);
    }
    return {};
}

std::optional<Interval> snl_interval(const std::vector<LevelStats>& levels) {
    std::optional<Interval> best;
    std::size_t best_len = 0;
    std::size_t i = 0;
    while (i < levels.size()) {
        if (levels[i].r_sd < 0.5) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < levels.size() && levels[j + 1].r_sd >= 0.5) {
            ++j;
        }
        if (j - i + 1 > best_len) {
            best_len = j - i + 1;
            best = Interval{levels[i].level, levels[j].level};
        }
        i = j + 1;
    }
    return best;
}

SnlReport run_sweep(const ExperimentConfig& config) {
    config.validate();
    const auto signal = make_signal(config.signal);
    const std::size_t levels = config.noise_grid.size();
    const std::size_t xi = config.seeds_per_level;

    SnlReport report;
    report.seeds_per_level = xi;
    report.trials.resize(levels * xi);

    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto total = static_cast<std::int64_t>(levels * xi);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < total; ++i) {
        const auto level_index = static_cast<std::size_t>(i) / xi;
        const auto trial = static_cast<std::size_t>(i) % xi;
        try {
            const double level = config.noise_grid[level_index];
            const auto noise_seed = derive_seed(config.master_seed, {level_index, trial});
            const auto detector_seed = derive_seed(config.master_seed, {level_index, trial, 1});
            const auto noisy = sim::add_noise(signal.signal, {level, noise_seed});
            const auto found = run_detector(config, noisy, detector_seed);

            TrialRecord rec;
            rec.level = level;
            rec.trial = trial;
            rec.seed = noise_seed;
            rec.detected_count = found.count();
            if (found.count() == signal.truth.count()) {
                rec.rmse = rmse(found, signal.truth);
            }
            rec.success = success(found, signal.truth, config.v);
            report.trials[static_cast<std::size_t>(i)] = rec;
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    for (std::size_t l = 0; l < levels; ++l) {
        LevelStats stats;
        stats.level = config.noise_grid[l];
        std::size_t successes = 0;
        std::size_t correct = 0;
        double rmse_sum = 0.0;
        for (std::size_t t = 0; t < xi; ++t) {
            const auto& rec = report.trials[l * xi + t];
            successes += rec.success ? 1 : 0;
            if (rec.rmse) {
                ++correct;
                rmse_sum += *rec.rmse;
            }
        }
        stats.r_sd = static_cast<double>(successes) / static_cast<double>(xi);
        stats.r1 = static_cast<double>(correct) / static_cast<double>(xi);
        if (correct > 0) {
            stats.mean_rmse_when_correct = rmse_sum / static_cast<double>(correct);
        }
        report.per_level.push_back(stats);
    }
    report.snl_interval = snl_interval(report.per_level);
    return report;
}

double max_abs_rsd_difference(const SnlReport& a, const SnlReport& b) {
    if (a.per_level.size() != b.per_level.size()) {
        throw Error(ErrorKind::dimension, "reports cover different noise grids");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.per_level.size(); ++i) {
        worst = std::max(worst, std::abs(a.per_level[i].r_sd - b.per_level[i].r_sd));
    }
    return worst;
}

SensitivityReport sensitivity_sweep(SweepParam param, const std::vector<std::size_t>& values,
                                    const ExperimentConfig& base) {
    if (values.empty()) {
        throw Error(ErrorKind::precondition, "sensitivity sweep needs at least one value");
    }
    SensitivityReport out;
    out.param = param;
    for (std::size_t value : values) {
        auto cfg = base;
        if (param == SweepParam::Q) {
            cfg.ssaid.realizations = value;
        } else {
            cfg.ssaid.noise_levels = value;
        }
        out.reports.emplace_back(value, run_sweep(cfg));
    }
    for (std::size_t i = 1; i < out.reports.size(); ++i) {
        out.consecutive_max_diff.push_back(
            max_abs_rsd_difference(out.reports[i - 1].second, out.reports[i].second));
    }
    return out;
}

std::vector<CalibrationRow> calibrate_threshold(const std::vector<double>& constants,
                                                std::size_t length, std::size_t seeds,
                                                std::uint64_t master_seed,
                                                const id::IdConfig& base) {
    if (seeds < 1) {
        throw Error(ErrorKind::precondition, "calibration needs at least one seed");
    }
    // One noise draw per seed, shared by every constant.
    std::vector<std::vector<double>> draws(seeds, std::vector<double>(length));
    for (std::size_t i = 0; i < seeds; ++i) {
        auto engine = make_engine(master_seed, {i});
        fill_standard_normal(engine, draws[i]);
    }
    std::vector<CalibrationRow> rows;
    for (double c : constants) {
        auto cfg = base;
        cfg.threshold_const = c;
        std::size_t hits = 0;
        for (const auto& x : draws) {
            hits += id::detect(std::span<const double>(x), cfg).count() > 0 ? 1 : 0;
        }
        rows.push_back({c, static_cast<double>(hits) / static_cast<double>(seeds)});
    }
    return rows;
}

} // namespace ssaid::bench
