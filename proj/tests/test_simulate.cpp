#include <ssaid/simulate.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ssaid;

namespace {

double max_step(const TimeSeries& x) {
    double m = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        m = std::max(m, std::abs(x[t] - x[t - 1]));
    }
    return m;
}

} // namespace

TEST(SseSignal, NoEventsIsAStraightLine) {
    sim::SseSignalSpec spec;
    spec.n_events = 0;
    const auto s = sim::generate_sse_like(spec);
    EXPECT_TRUE(s.truth.locations.empty());
    const double step = s.signal[1] - s.signal[0];
    for (std::size_t t = 1; t < s.signal.size(); ++t) {
        EXPECT_NEAR(s.signal[t] - s.signal[t - 1], step, 1e-12);
    }
}

TEST(SseSignal, DefaultGeometry) {
    const auto s = sim::generate_sse_like({});
    EXPECT_EQ(s.signal.size(), 365u);
    EXPECT_EQ(s.truth.locations,
              (std::vector<Index>{31, 38, 105, 112, 179, 186, 253, 260, 327, 334}));
    EXPECT_NEAR(mean(s.signal.values()), 0.0, 1e-12);
    EXPECT_NEAR(sample_std(s.signal.values()), 1.0, 1e-12);
}

TEST(SseSignal, LinearOutsideEvents) {
    const auto s = sim::generate_sse_like({});
    // Between the end of one event and the start of the next the signal
    // follows the background slope exactly.
    const double step = s.signal[50] - s.signal[49];
    for (std::size_t t = 40; t < 104; ++t) {
        EXPECT_NEAR(s.signal[t + 1] - s.signal[t], step, 1e-12);
    }
}

TEST(SseSignal, JumpRatioOneToFive) {
    sim::SseSignalSpec spec;
    spec.length = 400;
    spec.n_events = 2;
    spec.event_starts = {100, 300};
    spec.event_amplitudes = {10.0, 50.0};
    spec.inter_event_slope = 0.5;
    const auto s = sim::generate_sse_like(spec);
    // Jump = departure from the background line across each event window.
    const double slope = s.signal[60] - s.signal[59];
    auto jump = [&](std::size_t a, std::size_t b) {
        return (s.signal[b] - s.signal[a]) - slope * static_cast<double>(b - a);
    };
    const double small = jump(95, 115);
    const double big = jump(295, 315);
    EXPECT_LT(small, 0.0);
    EXPECT_NEAR(big / small, 5.0, 0.1);
}

TEST(SseSignal, ContinuousWithBoundedSteps) {
    for (auto ramp : {sim::RampShape::smooth_sigmoid, sim::RampShape::quadratic_ease,
                      sim::RampShape::linear}) {
        sim::SseSignalSpec spec;
        spec.ramp = ramp;
        const auto s = sim::generate_sse_like(spec);
        // Steepest raw slope: background plus the peak ramp rate.
        double peak = 1.0;
        if (ramp == sim::RampShape::smooth_sigmoid) {
            const double k = 2.0 * std::log(99.0);
            peak = (k / 4.0) / (1.0 - 2.0 / (1.0 + 99.0));
        } else if (ramp == sim::RampShape::quadratic_ease) {
            peak = 2.0;
        }
        const double raw = std::abs(spec.inter_event_slope) + 74.0 * peak / spec.event_duration;
        // The raw series is divided by its std; recover that factor from the
        // background slope.
        const double scale = (s.signal[60] - s.signal[59]) / spec.inter_event_slope;
        EXPECT_LE(max_step(s.signal), raw * std::abs(scale) * 1.5);
    }
}

TEST(SseSignal, ValidationErrors) {
    sim::SseSignalSpec overlap;
    overlap.n_events = 2;
    overlap.event_starts = {100, 104};
    EXPECT_THROW(sim::generate_sse_like(overlap), Error);

    sim::SseSignalSpec too_many;
    too_many.n_events = 7;
    EXPECT_THROW(sim::generate_sse_like(too_many), Error);

    sim::SseSignalSpec long_event;
    long_event.event_duration = 80;
    EXPECT_THROW(sim::generate_sse_like(long_event), Error);

    sim::SseSignalSpec amplitudes;
    amplitudes.event_amplitudes = {1, 2};
    EXPECT_THROW(sim::generate_sse_like(amplitudes), Error);

    sim::SseSignalSpec outside;
    outside.n_events = 1;
    outside.event_starts = {360};
    EXPECT_THROW(sim::generate_sse_like(outside), Error);
}

TEST(RampFraction, Endpoints) {
    for (auto ramp : {sim::RampShape::smooth_sigmoid, sim::RampShape::quadratic_ease,
                      sim::RampShape::linear}) {
        EXPECT_DOUBLE_EQ(sim::ramp_fraction(ramp, 0.0), 0.0);
        EXPECT_DOUBLE_EQ(sim::ramp_fraction(ramp, 1.0), 1.0);
        EXPECT_NEAR(sim::ramp_fraction(ramp, 0.5), 0.5, 1e-12);
        double previous = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double f = sim::ramp_fraction(ramp, i / 100.0);
            EXPECT_GE(f, previous);
            previous = f;
        }
    }
}

TEST(AddNoise, ZeroLevelIsIdentity) {
    const auto s = sim::generate_sse_like({});
    const auto x = sim::add_noise(s.signal, {0.0, 5});
    EXPECT_EQ(std::vector<double>(x.values().begin(), x.values().end()),
              std::vector<double>(s.signal.values().begin(), s.signal.values().end()));
    EXPECT_THROW(sim::add_noise(s.signal, {-0.1, 5}), Error);
}

TEST(AddNoise, LevelAndDeterminism) {
    const auto s = sim::generate_sse_like({});
    const auto a = sim::add_noise(s.signal, {0.4, 17});
    const auto b = sim::add_noise(s.signal, {0.4, 17});
    const auto c = sim::add_noise(s.signal, {0.4, 18});
    std::vector<double> diff(s.signal.size());
    for (std::size_t t = 0; t < diff.size(); ++t) {
        diff[t] = a[t] - s.signal[t];
        EXPECT_EQ(a[t], b[t]);
        EXPECT_NE(a[t], c[t]);
    }
    EXPECT_NEAR(sample_std(diff), 0.4, 0.02);
    EXPECT_NEAR(mean(diff), 0.0, 3.0 * 0.4 / std::sqrt(365.0));
    EXPECT_EQ(a.size(), s.signal.size());
    EXPECT_EQ(a.dt(), s.signal.dt());
}

TEST(Family, TentFunction) {
    sim::FamilySpec spec{sim::Family::piecewise_linear, 100, {50}, {{0, 1, 0, 0}, {50, -1, 0, 0}}};
    const auto s = sim::generate_family(spec);
    EXPECT_EQ(s.truth.locations, (std::vector<Index>{50}));
    EXPECT_DOUBLE_EQ(s.signal[50], 50.0);
    EXPECT_DOUBLE_EQ(s.signal[49], 49.0);
    EXPECT_DOUBLE_EQ(s.signal[51], 49.0);
    EXPECT_LE(max_step(s.signal), 1.0 * 1.5);
}

TEST(Family, DiscontinuityRejected) {
    sim::FamilySpec spec{sim::Family::piecewise_linear, 100, {50}, {{0, 1, 0, 0}, {0, -1, 0, 0}}};
    EXPECT_THROW(sim::generate_family(spec), Error);
    EXPECT_NO_THROW(sim::generate_family(sim::make_continuous(spec)));
    sim::FamilySpec shape{sim::Family::piecewise_linear, 100, {50}, {{0, 1, 0, 0}}};
    EXPECT_THROW(sim::generate_family(shape), Error);
}

TEST(Family, SinusoidalContinuity) {
    auto spec = sim::make_continuous({sim::Family::sinusoidal,
                                      200,
                                      {60, 130},
                                      {{0, 2.0, 0.1, 0.3}, {0, 1.0, 0.2, 1.0}, {0, 3.0, 0.05, -0.5}}});
    const auto s = sim::generate_family(spec);
    Index start = 0;
    for (std::size_t j = 0; j < spec.knots.size(); ++j) {
        const double left = sim::evaluate_segment(spec.kind, spec.segments[j],
                                                  static_cast<double>(spec.knots[j] - start));
        const double right = sim::evaluate_segment(spec.kind, spec.segments[j + 1], 0.0);
        EXPECT_NEAR(left, right, 1e-12);
        start = spec.knots[j];
    }
    EXPECT_LE(max_step(s.signal), 0.2 * 1.5);
}

TEST(Family, QuadraticCurvatureFlipsAtKnot) {
    const auto spec = sim::make_continuous(
        {sim::Family::piecewise_quadratic, 120, {70}, {{0, 0.5, 0.01, 0}, {0, 1.9, -0.02, 0}}});
    const auto s = sim::generate_family(spec);
    std::vector<Index> flips;
    int previous = 0;
    for (std::size_t t = 1; t + 1 < s.signal.size(); ++t) {
        const double d2 = s.signal[t + 1] - 2.0 * s.signal[t] + s.signal[t - 1];
        const int sign = d2 > 1e-12 ? 1 : d2 < -1e-12 ? -1 : 0;
        if (sign != 0 && previous != 0 && sign != previous) {
            flips.push_back(static_cast<Index>(t));
        }
        if (sign != 0) {
            previous = sign;
        }
    }
    ASSERT_EQ(flips.size(), 1u);
    EXPECT_NEAR(static_cast<double>(flips[0]), 70.0, 1.0);
}

TEST(Family, ExponentialSegments) {
    const auto spec = sim::make_continuous(
        {sim::Family::piecewise_exponential, 90, {30, 60}, {{1, 2, 0.02, 0}, {0, -1, 0.05, 0}, {0, 3, -0.04, 0}}});
    const auto s = sim::generate_family(spec);
    EXPECT_EQ(s.truth.locations, (std::vector<Index>{30, 60}));
    EXPECT_DOUBLE_EQ(s.signal[0], 1.0);
}
