#include <ssaid/isolate_detect.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace ssaid::id {

namespace {

// Relative floor on the noise scale so that exactly piecewise-linear input
// (estimated sigma = 0) still gets a positive threshold above round-off.
constexpr double kRelativeSigmaFloor = 1e-6;
constexpr double kAbsoluteSigmaFloor = 1e-12;

class Isolator {
public:
    Isolator(const SlopeContrast& contrast, const IdConfig& config, double zeta)
        : contrast_(contrast), step_(config.expansion_step), gap_(config.min_gap),
          zeta2_(zeta * zeta) {}

    void run(Index s, Index e) {
        if (!searchable(s, e)) {
            return;
        }
        const Index span = e - s;
        const Index steps = (span + step_ - 1) / step_;
        for (Index j = 1; j <= steps; ++j) {
            const Index right = std::min(s + j * step_, e);
            if (try_interval(s, right, s, e)) {
                return;
            }
            const Index left = std::max(e - j * step_, s);
            if (left == s && right == e) {
                break;
            }
            if (try_interval(left, e, s, e)) {
                return;
            }
        }
    }

    std::vector<Index> take() {
        std::sort(found_.begin(), found_.end());
        return std::move(found_);
    }

private:
    bool searchable(Index s, Index e) const { return e - s >= 4 && e - s >= 2 * gap_ - 2; }

    bool try_interval(Index lo, Index hi, Index s, Index e) {
        if (!searchable(lo, hi)) {
            return false;
        }
        const auto peak = contrast_.peak_above(lo, hi, gap_, zeta2_);
        if (peak.location < 0 || !(peak.squared > zeta2_)) {
            return false;
        }
        // A change just past the admissible edge of the interval leaks into
        // its outermost contrast; locate over the interval widened by the gap
        // so that such a change is found where it is, not one sample short.
        const auto located = contrast_.peak(std::max(lo - gap_, s), std::min(hi + gap_, e), gap_);
        const Index b = located.location;
        found_.push_back(b);
        run(s, b);
        run(b, e);
        return true;
    }

    const SlopeContrast& contrast_;
    Index step_;
    Index gap_;
    double zeta2_;
    std::vector<Index> found_;
};

} // namespace

void IdConfig::validate() const {
    if (!(threshold_const > 0.0) || !std::isfinite(threshold_const)) {
        throw Error(ErrorKind::precondition, "threshold constant must be positive");
    }
    if (expansion_step < 1) {
        throw Error(ErrorKind::precondition, "expansion step must be positive");
    }
    if (min_gap < 2) {
        throw Error(ErrorKind::precondition, "min_gap must be at least 2");
    }
    if (sigma && !(*sigma > 0.0)) {
        throw Error(ErrorKind::precondition, "sigma override must be positive");
    }
}

double estimate_sigma(std::span<const double> x) {
    if (x.size() < 4) {
        throw Error(ErrorKind::input, "sigma estimate needs at least 4 samples");
    }
    std::vector<double> d(x.size() - 2);
    for (std::size_t i = 0; i + 2 < x.size(); ++i) {
        d[i] = x[i + 2] - 2.0 * x[i + 1] + x[i];
    }
    const double centre = median(d);
    for (double& v : d) {
        v = std::abs(v - centre);
    }
    return median(d) / 0.6745 / std::sqrt(6.0);
}

double estimate_sigma(const TimeSeries& series) { return estimate_sigma(series.values()); }

SlopeContrast::SlopeContrast(std::span<const double> x)
    : n_(x.size()), p0_(x.size() + 1, 0.0), p1_(x.size() + 1, 0.0) {
    // Centring leaves every contrast unchanged and keeps the prefix sums small.
    const double centre = x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) /
                                                static_cast<double>(x.size());
    for (std::size_t t = 0; t < n_; ++t) {
        const double v = x[t] - centre;
        p0_[t + 1] = p0_[t] + v;
        p1_[t + 1] = p1_[t] + static_cast<double>(t) * v;
    }
}

double SlopeContrast::squared(Index s, Index e, Index b) const noexcept {
    // The knot model adds the hinge h_t = (t - b)_+ to the line {1, t}; the
    // RSS drop is <x, h_perp>^2 / <h_perp, h_perp> with h_perp the part of h
    // orthogonal to the line on [s, e].
    const auto n = static_cast<double>(e - s + 1);
    const double mid = 0.5 * static_cast<double>(s + e);
    const double sx = p0_[e + 1] - p0_[s];
    const double sxu = (p1_[e + 1] - p1_[s]) - mid * sx;
    const double suu = n * (n * n - 1.0) / 12.0;

    const auto k = static_cast<double>(e - b);
    const double h1 = k * (k + 1.0) / 2.0;
    const double h2 = k * (k + 1.0) * (2.0 * k + 1.0) / 6.0;
    const double hu = (static_cast<double>(b) - mid) * h1 + h2;
    const double hx = (p1_[e + 1] - p1_[b + 1]) - static_cast<double>(b) * (p0_[e + 1] - p0_[b + 1]);

    const double num = hx - (sx / n) * h1 - (sxu / suu) * hu;
    const double den = h2 - h1 * h1 / n - hu * hu / suu;
    if (!(den > 0.0)) {
        return 0.0;
    }
    return num * num / den;
}

SlopeContrast::Peak SlopeContrast::peak(Index s, Index e, Index min_gap) const noexcept {
    return peak_above(s, e, min_gap, -1.0);
}

SlopeContrast::Peak SlopeContrast::peak_above(Index s, Index e, Index min_gap,
                                              double floor) const noexcept {
    // Same algebra as squared() with the interval terms hoisted. A first,
    // division-free pass checks num^2 > floor * den; the arg-max pass only
    // runs when some knot clears the floor.
    Peak best;
    const Index lo = s + min_gap - 1;
    const Index hi = e - min_gap + 1;
    if (lo > hi) {
        return best;
    }
    const auto n = static_cast<double>(e - s + 1);
    const double mid = 0.5 * static_cast<double>(s + e);
    const double sx = p0_[e + 1] - p0_[s];
    const double sxu = (p1_[e + 1] - p1_[s]) - mid * sx;
    const double suu = n * (n * n - 1.0) / 12.0;
    const double xbar = sx / n;
    const double beta = sxu / suu;
    const double inv_n = 1.0 / n;
    const double inv_suu = 1.0 / suu;
    const double p0e = p0_[e + 1];
    const double p1e = p1_[e + 1];
    const double* q0 = p0_.data() + 1;
    const double* q1 = p1_.data() + 1;

    auto terms = [&](std::size_t i, double bd, double& num, double& den) {
        const double k = static_cast<double>(e) - bd;
        const double h1 = 0.5 * k * (k + 1.0);
        const double h2 = h1 * (2.0 * k + 1.0) * (1.0 / 3.0);
        const double hu = (bd - mid) * h1 + h2;
        const double hx = (p1e - q1[i]) - bd * (p0e - q0[i]);
        num = hx - xbar * h1 - beta * hu;
        den = h2 - h1 * h1 * inv_n - hu * hu * inv_suu;
    };
    const auto count = static_cast<std::size_t>(hi - lo + 1);
    q0 += lo;
    q1 += lo;
    const auto first = static_cast<double>(lo);

    if (floor >= 0.0) {
        // Max of num^2 - floor * den over the chunk, written without
        // branches so that it vectorizes.
        constexpr std::size_t kChunk = 64;
        double excess[kChunk];
        for (std::size_t base = 0; base < count; base += kChunk) {
            const std::size_t len = std::min(kChunk, count - base);
            const double* __restrict a0 = q0 + base;
            const double* __restrict a1 = q1 + base;
            const double b0 = first + static_cast<double>(base);
            for (std::size_t i = 0; i < len; ++i) {
                const double bd = b0 + static_cast<double>(static_cast<std::int32_t>(i));
                const double k = static_cast<double>(e) - bd;
                const double h1 = 0.5 * k * (k + 1.0);
                const double h2 = h1 * (2.0 * k + 1.0) * (1.0 / 3.0);
                const double hu = (bd - mid) * h1 + h2;
                const double hx = (p1e - a1[i]) - bd * (p0e - a0[i]);
                const double num = hx - xbar * h1 - beta * hu;
                const double den = h2 - h1 * h1 * inv_n - hu * hu * inv_suu;
                excess[i] = num * num - floor * den;
            }
            for (std::size_t i = 0; i < len; ++i) {
                if (excess[i] > 0.0) {
                    goto exceeded;
                }
            }
        }
        return best;
    }
exceeded:
    best.squared = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
        double num;
        double den;
        terms(i, first + static_cast<double>(i), num, den);
        const double value = den > 0.0 ? num * num / den : 0.0;
        if (value > best.squared) {
            best.squared = value;
            best.location = lo + static_cast<Index>(i);
        }
    }
    return best;
}

double slope_contrast(const TimeSeries& series, Index s, Index e, Index b, Index min_gap) {
    const auto n = static_cast<Index>(series.size());
    if (min_gap < 2) {
        throw Error(ErrorKind::geometry, "min_gap must be at least 2");
    }
    if (s < 0 || e >= n || e - s < 4) {
        throw Error(ErrorKind::geometry, "contrast interval is too short or out of range");
    }
    if (b < s + min_gap - 1 || b > e - min_gap + 1) {
        throw Error(ErrorKind::geometry, "knot is too close to the interval ends");
    }
    const SlopeContrast contrast(series.values());
    return std::sqrt(std::max(contrast.squared(s, e, b), 0.0));
}

double detection_threshold(std::size_t length, double sigma, double threshold_const) {
    return threshold_const * sigma * std::sqrt(2.0 * std::log(static_cast<double>(length)));
}

DetectionResult detect(std::span<const double> x, const IdConfig& config) {
    config.validate();
    const auto n = static_cast<Index>(x.size());
    if (n < 2 * config.min_gap + 4) {
        throw Error(ErrorKind::input, "series too short for Isolate-Detect");
    }
    double sigma = config.sigma ? *config.sigma : estimate_sigma(x);
    if (!config.sigma) {
        const double scale = sample_std(x);
        sigma = std::max({sigma, kRelativeSigmaFloor * scale, kAbsoluteSigmaFloor});
    }
    const double zeta = detection_threshold(x.size(), sigma, config.threshold_const);

    const SlopeContrast contrast(x);
    Isolator isolator(contrast, config, zeta);
    isolator.run(0, n - 1);
    return DetectionResult{isolator.take()};
}

DetectionResult detect(const TimeSeries& series, const IdConfig& config) {
    return detect(series.values(), config);
}

} // namespace ssaid::id
