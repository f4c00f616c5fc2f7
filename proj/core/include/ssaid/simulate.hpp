#pragma once

// Ground-truthed test signals.

#include <ssaid/core.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ssaid::sim {

enum class RampShape {
    smooth_sigmoid,
    quadratic_ease,
    linear,
};

/// Slow-slip-like displacement: a background linear trend that reverses
/// during each event by a monotone ramp of total size -A_i. All times are in
/// samples (days).
struct SseSignalSpec {
    std::size_t length = 365;
    std::size_t n_events = 5;
    double event_duration = 7.0;
    double recurrence = 74.0;
    double inter_event_slope = 1.0;
    /// One value applies to every event; otherwise one per event.
    std::vector<double> event_amplitudes{74.0};
    RampShape ramp = RampShape::smooth_sigmoid;
    /// Start of the first event. Defaults to centring the event train.
    std::optional<double> first_start;
    /// Explicit event start times; overrides first_start and recurrence.
    std::vector<double> event_starts;

    void validate() const;
    std::vector<double> starts() const;
    double amplitude(std::size_t event) const;
};

struct Simulated {
    TimeSeries signal;
    GroundTruth truth;
};

/// Z-score normalized noiseless signal plus event start and end indices.
Simulated generate_sse_like(const SseSignalSpec& spec);

/// Fraction of the total event amplitude reached at normalized event time tau.
double ramp_fraction(RampShape shape, double tau);

struct NoiseSpec {
    double c_wn = 0.0;
    std::uint64_t seed = 0;
};

/// signal + c_wn * eps with eps i.i.d. standard Gaussian from the seeded stream.
TimeSeries add_noise(const TimeSeries& signal, const NoiseSpec& noise);

enum class Family {
    piecewise_linear,
    piecewise_quadratic,
    piecewise_exponential,
    sinusoidal,
};

/// Coefficients of one segment in local time u = t - (segment start):
///   linear       a + b u
///   quadratic    a + b u + c u^2
///   exponential  a + b (exp(c u) - 1)
///   sinusoidal   a + b sin(c u + d)
struct FamilySegment {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

struct FamilySpec {
    Family kind = Family::piecewise_linear;
    std::size_t length = 0;
    std::vector<Index> knots;
    std::vector<FamilySegment> segments; // knots.size() + 1 entries
};

double evaluate_segment(Family kind, const FamilySegment& seg, double u);

/// Fills in each segment's offset `a` from its predecessor's end value so the
/// signal is continuous. The first segment's offset is kept.
FamilySpec make_continuous(FamilySpec spec);

/// Raw (un-normalized) signal; throws when the parameterization is
/// discontinuous at a knot.
Simulated generate_family(const FamilySpec& spec);

} // namespace ssaid::sim
