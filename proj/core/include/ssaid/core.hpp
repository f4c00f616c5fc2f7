#pragma once

// Shared domain types, order statistics and accuracy metrics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssaid {

/// Sample index into a series. Signed so that location differences are
/// well defined.
using Index = std::int64_t;

enum class ErrorKind {
    precondition,
    input,
    dimension,
    domain,
    geometry,
    index,
    spec,
    parse,
};

/// Every failure raised by the library carries a kind so that callers (the
/// CLI in particular) can map it to an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Uniformly sampled scalar sequence. Values are finite and non-empty; the
/// sample spacing is strictly positive.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, double dt = 1.0, double origin = 0.0);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double dt() const noexcept { return dt_; }
    double origin() const noexcept { return origin_; }
    double time(std::size_t i) const noexcept { return origin_ + dt_ * static_cast<double>(i); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Same sampling grid, new values.
    TimeSeries with_values(std::vector<double> values) const;

    /// Contiguous sub-range [first, first + count) on the same grid.
    TimeSeries slice(std::size_t first, std::size_t count) const;

private:
    std::vector<double> values_;
    double dt_;
    double origin_;
};

/// Estimated change-points: strictly increasing interior sample indices.
struct DetectionResult {
    std::vector<Index> locations;

    std::size_t count() const noexcept { return locations.size(); }
    friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

/// True change-point locations of a simulated signal.
struct GroundTruth {
    std::vector<Index> locations;

    std::size_t count() const noexcept { return locations.size(); }
    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// Throws unless `locations` is strictly increasing and every entry lies in
/// [1, length - 2].
void check_interior(std::span<const Index> locations, std::size_t length);

/// Most frequent value; ties go to the smallest tied value.
Index mode(std::span<const Index> xs);

/// Root mean squared location error with sorted-order pairing. Only defined
/// when both sides have the same count.
double rmse(std::span<const Index> estimated, std::span<const Index> truth);
double rmse(const DetectionResult& estimated, const GroundTruth& truth);

/// 75th percentile, linear interpolation at zero-based rank 0.75 (n - 1).
double quartile3(std::span<const double> xs);

double median(std::span<const double> xs);
double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 divisor).
double sample_std(std::span<const double> xs);

/// Shift and scale to sample mean 0 and sample standard deviation 1.
TimeSeries zscore_normalize(const TimeSeries& series);

} // namespace ssaid
