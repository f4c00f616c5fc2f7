#include <ssaid/baseline.hpp>

#include <algorithm>
#include <cmath>

namespace ssaid::baseline {

namespace {

struct LineFit {
    double rss;
    double var;
};

// Least-squares line on x[first, first + n).
LineFit fit_line(std::span<const double> x, std::size_t first, std::size_t n) {
    const auto nd = static_cast<double>(n);
    const double mid = 0.5 * (nd - 1.0);
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[first + i];
    }
    mx /= nd;
    double sxx = 0.0;
    double sxu = 0.0;
    double suu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[first + i] - mx;
        const double du = static_cast<double>(i) - mid;
        sxx += dx * dx;
        sxu += dx * du;
        suu += du * du;
    }
    return {std::max(sxx - sxu * sxu / suu, 0.0), sxx / nd};
}

double gaussian_aic(double rss, std::size_t n, int params) {
    const auto nd = static_cast<double>(n);
    return nd * std::log(rss / nd) + 2.0 * params;
}

} // namespace

void AicConfig::validate() const {
    if (window < 6 || window % 2 != 0) {
        throw Error(ErrorKind::precondition, "AIC window must be even and at least 6");
    }
    if (!std::isfinite(threshold)) {
        throw Error(ErrorKind::precondition, "AIC threshold must be finite");
    }
}

std::vector<std::optional<double>> delta_aic_series(const TimeSeries& series, const AicConfig& config) {
    config.validate();
    const auto x = series.values();
    const std::size_t n = x.size();
    const std::size_t half = config.window / 2;
    if (n <= config.window) {
        throw Error(ErrorKind::input, "AIC window is longer than the series");
    }
    std::vector<std::optional<double>> out(n);
    for (std::size_t t = half; t + half < n; ++t) {
        const std::size_t first = t - half;
        const auto whole = fit_line(x, first, config.window);
        const auto left = fit_line(x, first, half);
        const auto right = fit_line(x, t, half);
        // Floor keeps exact fits finite; equal floors cancel in the difference.
        const double floor =
            std::max(1e-12 * static_cast<double>(config.window) * whole.var, 1e-300);
        const double rss_one = std::max(whole.rss, floor);
        const double rss_two = std::max(left.rss + right.rss, floor);
        out[t] = gaussian_aic(rss_two, config.window, 5) - gaussian_aic(rss_one, config.window, 3);
    }
    return out;
}

DetectionResult threshold_detect(const std::vector<std::optional<double>>& delta, double zeta) {
    DetectionResult result;
    std::size_t t = 0;
    while (t < delta.size()) {
        if (!(delta[t] && *delta[t] < zeta)) {
            ++t;
            continue;
        }
        std::size_t best = t;
        while (t < delta.size() && delta[t] && *delta[t] < zeta) {
            if (*delta[t] < *delta[best]) {
                best = t;
            }
            ++t;
        }
        result.locations.push_back(static_cast<Index>(best));
    }
    return result;
}

} // namespace ssaid::baseline
