#include <ssaid/core.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ssaid {

TimeSeries::TimeSeries(std::vector<double> values, double dt, double origin)
    : values_(std::move(values)), dt_(dt), origin_(origin) {
    if (values_.empty()) {
        throw Error(ErrorKind::input, "time series must not be empty");
    }
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
        throw Error(ErrorKind::input, "sample spacing must be positive and finite");
    }
    if (!std::isfinite(origin_)) {
        throw Error(ErrorKind::input, "time origin must be finite");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::input,
                        "non-finite value at sample " + std::to_string(i));
        }
    }
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
    return TimeSeries(std::move(values), dt_, origin_);
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size() || count == 0) {
        throw Error(ErrorKind::index, "slice out of range");
    }
    auto begin = values_.begin() + static_cast<std::ptrdiff_t>(first);
    return TimeSeries(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count)),
                      dt_, time(first));
}

void check_interior(std::span<const Index> locations, std::size_t length) {
    const auto last = static_cast<Index>(length) - 2;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (locations[i] < 1 || locations[i] > last) {
            throw Error(ErrorKind::index, "change-point " + std::to_string(locations[i]) +
                                              " is not an interior index");
        }
        if (i > 0 && locations[i] <= locations[i - 1]) {
            throw Error(ErrorKind::index, "change-points must be strictly increasing");
        }
    }
}

Index mode(std::span<const Index> xs) {
    if (xs.empty()) {
        throw Error(ErrorKind::precondition, "mode of an empty sequence");
    }
    // std::map iterates in ascending key order, so the first maximum found is
    // the smallest tied value.
    std::map<Index, std::size_t> counts;
    for (Index x : xs) {
        ++counts[x];
    }
    Index best = counts.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

double rmse(std::span<const Index> estimated, std::span<const Index> truth) {
    if (estimated.size() != truth.size()) {
        throw Error(ErrorKind::precondition,
                    "rmse is defined only when estimated and true counts match");
    }
    if (truth.empty()) {
        return 0.0;
    }
    std::vector<Index> p(estimated.begin(), estimated.end());
    std::vector<Index> q(truth.begin(), truth.end());
    std::sort(p.begin(), p.end());
    std::sort(q.begin(), q.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto d = static_cast<double>(p[i] - q[i]);
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(p.size()));
}

double rmse(const DetectionResult& estimated, const GroundTruth& truth) {
    return rmse(estimated.locations, truth.locations);
}

double quartile3(std::span<const double> xs) {
    if (xs.empty()) {
        throw Error(ErrorKind::precondition, "quartile of an empty sequence");
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = 0.75 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> xs) {
    if (xs.empty()) {
        throw Error(ErrorKind::precondition, "median of an empty sequence");
    }
    std::vector<double> v(xs.begin(), xs.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw Error(ErrorKind::precondition, "mean of an empty sequence");
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw Error(ErrorKind::precondition, "standard deviation needs at least two samples");
    }
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

TimeSeries zscore_normalize(const TimeSeries& series) {
    const auto xs = series.values();
    if (xs.size() < 2) {
        throw Error(ErrorKind::precondition, "z-score needs at least two samples");
    }
    const double m = mean(xs);
    const double s = sample_std(xs);
    if (!(s > 0.0)) {
        throw Error(ErrorKind::domain, "z-score of a constant series (zero variance)");
    }
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return (x - m) / s; });
    return series.with_values(std::move(out));
}

} // namespace ssaid
