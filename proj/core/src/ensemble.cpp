#include <ssaid/ensemble.hpp>

#include <ssaid/random.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

namespace ssaid {

namespace {

constexpr std::size_t kMinSeriesLength = 30;

Index column_mode(const std::vector<std::vector<Index>>& rows, std::size_t column) {
    std::vector<Index> values;
    values.reserve(rows.size());
    for (const auto& row : rows) {
        values.push_back(row[column]);
    }
    return mode(values);
}

// Sorts in place; returns true when duplicates had to be removed.
bool sort_unique(std::vector<Index>& xs) {
    std::sort(xs.begin(), xs.end());
    const auto last = std::unique(xs.begin(), xs.end());
    const bool collided = last != xs.end();
    xs.erase(last, xs.end());
    return collided;
}

} // namespace

void SsaidConfig::validate() const {
    if (noise_levels < 1) {
        throw Error(ErrorKind::precondition, "noise_levels (L) must be at least 1");
    }
    if (realizations < 1) {
        throw Error(ErrorKind::precondition, "realizations (Q) must be at least 1");
    }
    if (!(rmse_threshold > 0.0)) {
        throw Error(ErrorKind::precondition, "rmse_threshold (v) must be positive");
    }
    if (!(noise_max_factor > 0.0)) {
        throw Error(ErrorKind::precondition, "noise_max_factor must be positive");
    }
    if (ssa.num_components < 1) {
        throw Error(ErrorKind::precondition, "SSA component count (M) must be at least 1");
    }
    id.validate();
}

SsaidConfig SsaidConfig::paper() {
    SsaidConfig c;
    c.ssa.num_components = 100;
    c.noise_levels = 80;
    c.realizations = 50;
    return c;
}

SsaidConfig SsaidConfig::desk() {
    SsaidConfig c;
    c.ssa.num_components = 20;
    c.noise_levels = 20;
    c.realizations = 30;
    return c;
}

std::vector<double> noise_grid(double series_std, std::size_t levels, double factor) {
    if (levels < 1) {
        throw Error(ErrorKind::precondition, "noise grid needs at least one level");
    }
    if (!(series_std > 0.0) || !(factor > 0.0)) {
        throw Error(ErrorKind::precondition, "noise grid scale must be positive");
    }
    std::vector<double> grid(levels);
    for (std::size_t s = 1; s <= levels; ++s) {
        grid[s - 1] = static_cast<double>(s) / static_cast<double>(levels) * factor * series_std;
    }
    return grid;
}

void NoiseStream::fill(std::uint64_t member, std::span<double> out) const {
    auto engine = make_engine(seed, {k, s, member});
    fill_standard_normal(engine, out);
}

GroupStats run_group(const TimeSeries& y, double a_s, std::size_t q, const NoiseStream& noise,
                     const id::IdConfig& id_cfg) {
    if (q < 1) {
        throw Error(ErrorKind::precondition, "a group needs at least one member");
    }
    if (!(a_s >= 0.0)) {
        throw Error(ErrorKind::precondition, "added noise level must be non-negative");
    }

    const auto base = y.values();
    std::vector<double> z(base.size());
    std::vector<std::vector<Index>> members(q);
    std::vector<Index> counts(q);
    for (std::size_t m = 0; m < q; ++m) {
        noise.fill(m, z);
        for (std::size_t t = 0; t < z.size(); ++t) {
            z[t] = base[t] + a_s * z[t];
        }
        members[m] = id::detect(std::span<const double>(z), id_cfg).locations;
        counts[m] = static_cast<Index>(members[m].size());
    }

    GroupStats g;
    g.a_s = a_s;
    g.h_mode = mode(counts);

    std::vector<std::vector<Index>> qualified;
    for (auto& row : members) {
        if (static_cast<Index>(row.size()) == g.h_mode) {
            qualified.push_back(std::move(row));
        }
    }
    g.kappa = qualified.size();
    g.r2 = static_cast<double>(g.kappa) / static_cast<double>(q);
    if (g.h_mode == 0) {
        return g;
    }

    const auto h = static_cast<std::size_t>(g.h_mode);
    g.locations.resize(h);
    for (std::size_t i = 0; i < h; ++i) {
        g.locations[i] = column_mode(qualified, i);
    }
    std::sort(g.locations.begin(), g.locations.end());
    g.degenerate = std::adjacent_find(g.locations.begin(), g.locations.end()) != g.locations.end();
    if (g.degenerate) {
        return g;
    }

    std::vector<double> errors;
    errors.reserve(qualified.size());
    for (const auto& row : qualified) {
        errors.push_back(rmse(row, g.locations));
    }
    g.omega3 = quartile3(errors);
    return g;
}

double voting_success_prob(double p_s, std::size_t q) {
    if (!(p_s >= 0.0 && p_s <= 1.0)) {
        throw Error(ErrorKind::domain, "success probability must lie in [0, 1]");
    }
    if (q < 1) {
        throw Error(ErrorKind::precondition, "voting needs at least one realization");
    }
    const std::size_t first = (q + 1) / 2;
    if (p_s == 0.0) {
        return 0.0;
    }
    if (p_s == 1.0) {
        return 1.0;
    }
    const double lp = std::log(p_s);
    const double lq = std::log1p(-p_s);
    const double lgq = std::lgamma(static_cast<double>(q) + 1.0);
    double total = 0.0;
    for (std::size_t j = first; j <= q; ++j) {
        const auto jd = static_cast<double>(j);
        const auto rest = static_cast<double>(q - j);
        const double log_term =
            lgq - std::lgamma(jd + 1.0) - std::lgamma(rest + 1.0) + jd * lp + rest * lq;
        total += std::exp(log_term);
    }
    return std::min(total, 1.0);
}

std::vector<GroupStats> identify_in_snl(const std::vector<GroupStats>& groups, double v) {
    std::vector<GroupStats> out;
    for (const auto& g : groups) {
        if (g.r2 >= 0.5 && g.h_mode != 0 && !g.degenerate && g.omega3 && *g.omega3 <= v) {
            out.push_back(g);
        }
    }
    return out;
}

Aggregate aggregate(const std::vector<GroupStats>& in_snl) {
    if (in_snl.empty()) {
        throw Error(ErrorKind::precondition, "aggregate needs at least one in-SNL group");
    }
    std::vector<Index> counts;
    counts.reserve(in_snl.size());
    for (const auto& g : in_snl) {
        counts.push_back(g.h_mode);
    }
    const Index count = mode(counts);

    std::vector<std::vector<Index>> rows;
    for (const auto& g : in_snl) {
        if (g.h_mode == count) {
            rows.push_back(g.locations);
        }
    }
    Aggregate out;
    out.detection.locations.resize(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < out.detection.locations.size(); ++i) {
        out.detection.locations[i] = column_mode(rows, i);
    }
    out.collided = sort_unique(out.detection.locations);
    return out;
}

SsaidResult detect(const TimeSeries& series, const SsaidConfig& config) {
    config.validate();
    const std::size_t n = series.size();
    if (n < kMinSeriesLength) {
        throw Error(ErrorKind::input, "SSAID needs at least 30 samples");
    }

    const auto resolved = ssa::resolve(config.ssa, n);
    SsaidResult result;
    result.config_echo = config;
    result.config_echo.ssa.window = resolved.window;
    result.config_echo.ssa.num_components = resolved.num_components;

    const auto dec = ssa::decompose(series, result.config_echo.ssa);
    const auto partial = ssa::cumulative_reconstructions(dec);
    const auto levels =
        noise_grid(sample_std(series.values()), config.noise_levels, config.noise_max_factor);

    const std::size_t m = partial.size();
    const std::size_t l = levels.size();
    std::vector<TimeSeries> ys;
    ys.reserve(m);
    for (const auto& y : partial) {
        ys.push_back(series.with_values(y));
    }

    result.all_groups.resize(m * l);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto total = static_cast<std::int64_t>(m * l);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t g = 0; g < total; ++g) {
        const auto k = static_cast<std::size_t>(g) / l;
        const auto s = static_cast<std::size_t>(g) % l;
        try {
            const NoiseStream noise{config.seed, k + 1, s + 1};
            auto stats = run_group(ys[k], levels[s], config.realizations, noise, config.id);
            stats.k = k + 1;
            stats.s = s + 1;
            result.all_groups[static_cast<std::size_t>(g)] = std::move(stats);
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

    result.in_snl_groups = identify_in_snl(result.all_groups, config.rmse_threshold);
    if (!result.in_snl_groups.empty()) {
        auto agg = aggregate(result.in_snl_groups);
        if (agg.collided) {
            result.warnings.emplace_back(
                "column modes collided during aggregation; duplicates dropped");
        }
        result.detection = std::move(agg.detection);
    }
    return result;
}

std::vector<WindowSpan> sliding_windows(std::size_t length, std::size_t segment_len) {
    if (segment_len < 10) {
        throw Error(ErrorKind::input, "segment length must be at least 10");
    }
    if (length < 3 * segment_len) {
        throw Error(ErrorKind::input, "series shorter than one sliding window (3 segments)");
    }
    const std::size_t segments = length / segment_len;
    std::vector<WindowSpan> windows;
    for (std::size_t w = 0; w + 3 <= segments; ++w) {
        const std::size_t first = w * segment_len;
        const std::size_t end = (w + 3 == segments) ? length : (w + 3) * segment_len;
        windows.push_back({first, end - first});
    }
    return windows;
}

SsaidResult detect_sliding(const TimeSeries& series, const SsaidConfig& config,
                           std::size_t segment_len) {
    config.validate();
    const auto windows = sliding_windows(series.size(), segment_len);

    struct Candidate {
        Index location;
        std::size_t window;
        double centrality;
    };
    std::vector<Candidate> candidates;

    SsaidResult merged;
    merged.config_echo = config;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto& span = windows[w];
        SsaidConfig local = config;
        local.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(w + 1)});
        auto part = detect(series.slice(span.first, span.length), local);

        const double midpoint =
            static_cast<double>(span.first) + 0.5 * static_cast<double>(span.length - 1);
        for (Index loc : part.detection.locations) {
            const Index global = loc + static_cast<Index>(span.first);
            candidates.push_back({global, w + 1, std::abs(static_cast<double>(global) - midpoint)});
        }
        auto relabel = [&](std::vector<GroupStats>& groups, std::vector<GroupStats>& into) {
            for (auto& g : groups) {
                g.window = w + 1;
                for (auto& loc : g.locations) {
                    loc += static_cast<Index>(span.first);
                }
                into.push_back(std::move(g));
            }
        };
        relabel(part.all_groups, merged.all_groups);
        relabel(part.in_snl_groups, merged.in_snl_groups);
        for (auto& msg : part.warnings) {
            merged.warnings.push_back("window " + std::to_string(w + 1) + ": " + msg);
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.location != b.location ? a.location < b.location : a.window < b.window;
    });

    // Single-linkage clusters with radius v; each cluster keeps the detections
    // of the window in which it sits most centrally.
    const double radius = config.rmse_threshold;
    std::vector<Index> out;
    std::size_t i = 0;
    while (i < candidates.size()) {
        std::size_t j = i + 1;
        while (j < candidates.size() &&
               static_cast<double>(candidates[j].location - candidates[j - 1].location) <= radius) {
            ++j;
        }
        std::size_t best = i;
        for (std::size_t c = i + 1; c < j; ++c) {
            const auto& a = candidates[c];
            const auto& b = candidates[best];
            if (a.centrality < b.centrality ||
                (a.centrality == b.centrality && a.window < b.window)) {
                best = c;
            }
        }
        for (std::size_t c = i; c < j; ++c) {
            if (candidates[c].window == candidates[best].window) {
                out.push_back(candidates[c].location);
            }
        }
        i = j;
    }
    if (sort_unique(out)) {
        merged.warnings.emplace_back("duplicate locations dropped while merging windows");
    }
    merged.detection.locations = std::move(out);
    return merged;
}

} // namespace ssaid
