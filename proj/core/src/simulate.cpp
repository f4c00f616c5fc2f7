#include <ssaid/simulate.hpp>

#include <ssaid/random.hpp>

#include <algorithm>
#include <cmath>

namespace ssaid::sim {

namespace {

// Logistic steepness such that the ramp spans the 1%..99% band of the curve.
const double kLogisticSteepness = 2.0 * std::log(99.0);

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Index nearest_index(double t) { return static_cast<Index>(std::llround(t)); }

} // namespace

double ramp_fraction(RampShape shape, double tau) {
    if (tau <= 0.0) {
        return 0.0;
    }
    if (tau >= 1.0) {
        return 1.0;
    }
    switch (shape) {
    case RampShape::smooth_sigmoid: {
        const double lo = logistic(-0.5 * kLogisticSteepness);
        const double hi = logistic(0.5 * kLogisticSteepness);
        return (logistic(kLogisticSteepness * (tau - 0.5)) - lo) / (hi - lo);
    }
    case RampShape::quadratic_ease:
        return tau < 0.5 ? 2.0 * tau * tau : 1.0 - 2.0 * (1.0 - tau) * (1.0 - tau);
    case RampShape::linear:
        return tau;
    }
    return tau;
}

void SseSignalSpec::validate() const {
    if (length < 8) {
        throw Error(ErrorKind::spec, "signal length must be at least 8");
    }
    if (!(event_duration > 0.0) || !std::isfinite(event_duration)) {
        throw Error(ErrorKind::spec, "event duration must be positive");
    }
    if (!std::isfinite(inter_event_slope)) {
        throw Error(ErrorKind::spec, "inter-event slope must be finite");
    }
    if (n_events > 0) {
        if (event_amplitudes.size() != 1 && event_amplitudes.size() != n_events) {
            throw Error(ErrorKind::spec, "need one amplitude or one per event");
        }
        for (double a : event_amplitudes) {
            if (!std::isfinite(a)) {
                throw Error(ErrorKind::spec, "event amplitudes must be finite");
            }
        }
        if (event_starts.empty()) {
            if (!(recurrence > 0.0) || !(event_duration < recurrence)) {
                throw Error(ErrorKind::spec, "event duration must be shorter than the recurrence");
            }
            if (static_cast<double>(n_events) * recurrence >
                static_cast<double>(length) + recurrence) {
                throw Error(ErrorKind::spec, "too many events for the signal length");
            }
        } else if (event_starts.size() != n_events) {
            throw Error(ErrorKind::spec, "need one explicit start per event");
        }
    }
    const auto s = starts();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && s[i] < s[i - 1] + event_duration) {
            throw Error(ErrorKind::spec, "events overlap");
        }
        const Index first = nearest_index(s[i]);
        const Index last = nearest_index(s[i] + event_duration);
        if (first < 1 || last > static_cast<Index>(length) - 2) {
            throw Error(ErrorKind::spec, "event " + std::to_string(i + 1) +
                                             " does not lie strictly inside the signal");
        }
    }
}

std::vector<double> SseSignalSpec::starts() const {
    if (!event_starts.empty()) {
        return event_starts;
    }
    const double span = static_cast<double>(n_events == 0 ? 0 : n_events - 1) * recurrence;
    const double first =
        first_start.value_or(0.5 * (static_cast<double>(length) - span - event_duration));
    std::vector<double> out;
    for (std::size_t i = 0; i < n_events; ++i) {
        out.push_back(first + static_cast<double>(i) * recurrence);
    }
    return out;
}

double SseSignalSpec::amplitude(std::size_t event) const {
    return event_amplitudes.size() == 1 ? event_amplitudes.front() : event_amplitudes.at(event);
}

Simulated generate_sse_like(const SseSignalSpec& spec) {
    spec.validate();
    const auto starts = spec.starts();
    std::vector<double> f(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
        const auto tt = static_cast<double>(t);
        double v = spec.inter_event_slope * tt;
        for (std::size_t i = 0; i < starts.size(); ++i) {
            v -= spec.amplitude(i) * ramp_fraction(spec.ramp, (tt - starts[i]) / spec.event_duration);
        }
        f[t] = v;
    }
    GroundTruth truth;
    for (double s : starts) {
        truth.locations.push_back(nearest_index(s));
        truth.locations.push_back(nearest_index(s + spec.event_duration));
    }
    check_interior(truth.locations, spec.length);
    return {zscore_normalize(TimeSeries(std::move(f))), std::move(truth)};
}

TimeSeries add_noise(const TimeSeries& signal, const NoiseSpec& noise) {
    if (!(noise.c_wn >= 0.0) || !std::isfinite(noise.c_wn)) {
        throw Error(ErrorKind::precondition, "noise level must be non-negative");
    }
    std::vector<double> out(signal.values().begin(), signal.values().end());
    if (noise.c_wn == 0.0) {
        return signal.with_values(std::move(out));
    }
    std::vector<double> eps(out.size());
    auto engine = make_engine(noise.seed);
    fill_standard_normal(engine, eps);
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] += noise.c_wn * eps[t];
    }
    return signal.with_values(std::move(out));
}

double evaluate_segment(Family kind, const FamilySegment& seg, double u) {
    switch (kind) {
    case Family::piecewise_linear:
        return seg.a + seg.b * u;
    case Family::piecewise_quadratic:
        return seg.a + seg.b * u + seg.c * u * u;
    case Family::piecewise_exponential:
        return seg.a + seg.b * std::expm1(seg.c * u);
    case Family::sinusoidal:
        return seg.a + seg.b * std::sin(seg.c * u + seg.d);
    }
    return seg.a;
}

namespace {

void check_family_shape(const FamilySpec& spec) {
    if (spec.length < 4) {
        throw Error(ErrorKind::spec, "family signal length must be at least 4");
    }
    if (spec.segments.size() != spec.knots.size() + 1) {
        throw Error(ErrorKind::spec, "need exactly one segment more than knots");
    }
    check_interior(spec.knots, spec.length);
}

} // namespace

FamilySpec make_continuous(FamilySpec spec) {
    check_family_shape(spec);
    Index start = 0;
    for (std::size_t j = 0; j < spec.knots.size(); ++j) {
        const auto span = static_cast<double>(spec.knots[j] - start);
        const double end_value = evaluate_segment(spec.kind, spec.segments[j], span);
        auto& next = spec.segments[j + 1];
        // Offset a of the next segment so that it starts at end_value.
        next.a = 0.0;
        next.a = end_value - evaluate_segment(spec.kind, next, 0.0);
        start = spec.knots[j];
    }
    return spec;
}

Simulated generate_family(const FamilySpec& spec) {
    check_family_shape(spec);
    Index start = 0;
    for (std::size_t j = 0; j < spec.knots.size(); ++j) {
        const auto span = static_cast<double>(spec.knots[j] - start);
        const double left = evaluate_segment(spec.kind, spec.segments[j], span);
        const double right = evaluate_segment(spec.kind, spec.segments[j + 1], 0.0);
        if (std::abs(left - right) > 1e-9 * (1.0 + std::abs(left))) {
            throw Error(ErrorKind::spec,
                        "discontinuous parameterization at knot " + std::to_string(spec.knots[j]));
        }
        start = spec.knots[j];
    }
    std::vector<double> f(spec.length);
    std::size_t seg = 0;
    Index seg_start = 0;
    for (std::size_t t = 0; t < spec.length; ++t) {
        const auto ti = static_cast<Index>(t);
        while (seg < spec.knots.size() && ti > spec.knots[seg]) {
            seg_start = spec.knots[seg];
            ++seg;
        }
        f[t] = evaluate_segment(spec.kind, spec.segments[seg], static_cast<double>(ti - seg_start));
    }
    for (double v : f) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::spec, "family parameters produce non-finite values");
        }
    }
    return {TimeSeries(std::move(f)), GroundTruth{spec.knots}};
}

} // namespace ssaid::sim
