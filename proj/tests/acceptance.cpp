// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <ssaid/baseline.hpp>
#include <ssaid/ensemble.hpp>
#include <ssaid/experiment.hpp>
#include <ssaid/isolate_detect.hpp>
#include <ssaid/random.hpp>
#include <ssaid/ssa.hpp>
#include <ssaid_tools/commands.hpp>
#include <ssaid_tools/input.hpp>

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ssaid;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string rates(const bench::SnlReport& r) {
    std::string s;
    for (const auto& l : r.per_level) {
        s += fmt("%.2f:", l.level) + fmt("%.2f ", l.r_sd);
    }
    if (!s.empty()) {
        s.pop_back();
    }
    return s;
}

double binomial_tail(double p, std::size_t q) {
    // P(X >= q/2) for X ~ Bin(q, p), summed term by term.
    double total = 0.0;
    for (std::size_t i = (q + 1) / 2; i <= q; ++i) {
        double c = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            c = c * static_cast<double>(q - j) / static_cast<double>(j + 1);
        }
        total += c * std::pow(p, static_cast<double>(i)) * std::pow(1.0 - p, static_cast<double>(q - i));
    }
    return total;
}

Outcome criterion1() {
    const double p = voting_success_prob(0.6, 100);
    bool ok = std::abs(p - 0.9832) <= 1e-4;
    double worst = 0.0;
    for (std::size_t q = 1; q <= 20; ++q) {
        for (int i = 1; i <= 9; ++i) {
            const double ps = 0.1 * i;
            worst = std::max(worst, std::abs(voting_success_prob(ps, q) - binomial_tail(ps, q)));
        }
    }
    ok = ok && worst <= 1e-12;
    return {ok, fmt("P(0.6, 100) = %.6f", p) + fmt(", max brute-force gap %.2e", worst)};
}

Outcome criterion2() {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> length(50, 500);
    std::uniform_int_distribution<std::size_t> count(1, 40);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto n = length(rng);
        auto engine = make_engine(1000 + i);
        std::vector<double> v(n);
        fill_standard_normal(engine, v);
        for (std::size_t t = 1; t < n; ++t) {
            v[t] += 0.8 * v[t - 1] + 0.01 * static_cast<double>(t);
        }
        const auto dec = ssa::decompose(TimeSeries(v), {0, count(rng)});
        double err = 0.0;
        double scale = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double sum = 0.0;
            for (const auto& c : dec.components) {
                sum += c[t];
            }
            err = std::max(err, std::abs(sum - v[t]));
            scale = std::max(scale, std::abs(v[t]));
        }
        worst = std::max(worst, err / scale);
    }
    return {worst <= 1e-9, fmt("max relative error %.2e over 100 inputs", worst)};
}

Outcome criterion3() {
    std::mt19937_64 rng(3);
    std::size_t exact = 0;
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t kinks = 1 + instance % 4;
        const std::size_t n = 120 + 40 * kinks + std::uniform_int_distribution<std::size_t>(0, 200)(rng);
        // Draw kink positions with every segment at least 40 long.
        std::vector<Index> knots;
        const std::size_t slack = n - 40 * (kinks + 1);
        std::vector<std::size_t> offsets(kinks);
        for (auto& o : offsets) {
            o = std::uniform_int_distribution<std::size_t>(0, slack)(rng);
        }
        std::sort(offsets.begin(), offsets.end());
        for (std::size_t j = 0; j < kinks; ++j) {
            knots.push_back(static_cast<Index>(40 * (j + 1) + offsets[j]));
        }
        std::uniform_real_distribution<double> change(0.3, 1.5);
        std::bernoulli_distribution sign(0.5);
        std::vector<double> v(n);
        double slope = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        std::size_t next = 0;
        for (std::size_t t = 1; t < n; ++t) {
            if (next < knots.size() && static_cast<Index>(t) == knots[next] + 1) {
                slope += (sign(rng) ? 1.0 : -1.0) * change(rng);
                ++next;
            }
            v[t] = v[t - 1] + slope;
        }
        const auto found = id::detect(TimeSeries(v), {});
        if (found.count() == knots.size()) {
            bool near = true;
            for (std::size_t j = 0; j < knots.size(); ++j) {
                near = near && std::abs(found.locations[j] - knots[j]) <= 2;
            }
            exact += near;
        }
    }
    std::size_t quiet = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto engine = make_engine(seed, {3});
        std::vector<double> v(365);
        fill_standard_normal(engine, v);
        quiet += id::detect(TimeSeries(v), {}).count() == 0;
    }
    return {exact == 50 && quiet >= 190,
            std::to_string(exact) + "/50 noiseless instances exact, " + std::to_string(quiet) +
                "/200 noise series with no detections"};
}

std::vector<double> grid(double first, double last, double step) {
    std::vector<double> g;
    for (int i = 0; first + i * step <= last + 1e-9; ++i) {
        g.push_back(std::round((first + i * step) * 1e6) / 1e6);
    }
    return g;
}

Outcome criterion4() {
    bench::ExperimentConfig cfg;
    cfg.detector = bench::Detector::id_direct;
    cfg.noise_grid = grid(0.05, 0.5, 0.05);
    cfg.seeds_per_level = 50;
    const auto r = bench::run_sweep(cfg);
    bool low = true;
    bool peak = false;
    for (const auto& l : r.per_level) {
        if (l.level <= 0.10 + 1e-9) {
            low = low && l.r_sd < 0.2;
        }
        if (l.level >= 0.2 - 1e-9) {
            peak = peak || l.r_sd >= 0.5;
        }
    }
    std::string snl = "none";
    if (r.snl_interval) {
        snl = fmt("[%.2f, ", r.snl_interval->first) + fmt("%.2f]", r.snl_interval->second);
    }
    return {low && peak, "r_sd " + rates(r) + ", SNL " + snl};
}

Outcome criterion5() {
    bench::ExperimentConfig cfg;
    cfg.noise_grid = {0.05, 0.15, 0.25};
    cfg.seeds_per_level = 20;
    cfg.ssaid = SsaidConfig::desk();
    const auto r = bench::run_sweep(cfg);
    bool ok = true;
    std::string detail;
    for (double level : cfg.noise_grid) {
        std::size_t good = 0;
        for (const auto& t : r.trials) {
            good += t.level == level && t.detected_count == 10 && t.rmse && *t.rmse <= 3.0;
        }
        ok = ok && good >= 18;
        detail += fmt("%.2f:", level) + std::to_string(good) + "/20 ";
    }
    detail.pop_back();
    return {ok, "successes " + detail};
}

Outcome criterion6() {
    bench::ExperimentConfig cfg;
    sim::SseSignalSpec line;
    line.n_events = 0;
    cfg.signal = line;
    cfg.noise_grid = {0.1, 0.5, 1.0};
    cfg.seeds_per_level = 20;
    const auto r = bench::run_sweep(cfg);
    std::size_t empty = 0;
    for (const auto& t : r.trials) {
        empty += t.detected_count == 0;
    }
    return {empty * 100 >= 95 * r.trials.size(),
            std::to_string(empty) + "/" + std::to_string(r.trials.size()) + " runs with no detections"};
}

Outcome criterion7() {
    const auto clean = sim::generate_sse_like({});
    const auto noisy = sim::add_noise(clean.signal, {0.25, derive_seed(7, {0})});
    const auto delta = baseline::delta_aic_series(noisy, {});
    std::size_t hits = 0;
    std::size_t best_gap = 1000;
    for (int i = 0; i < 50; ++i) {
        const double zeta = -60.0 + 60.0 * i / 49.0;
        const auto found = baseline::threshold_detect(delta, zeta);
        const auto gap = static_cast<std::size_t>(
            std::abs(static_cast<long>(found.count()) - 10));
        best_gap = std::min(best_gap, gap);
        hits += found.count() == 10 && rmse(found, clean.truth) <= 3.0;
    }
    auto cfg = SsaidConfig::desk();
    cfg.seed = derive_seed(7, {1});
    const auto found = detect(noisy, cfg).detection;
    const bool ssaid_ok = found.count() == 10 && rmse(found, clean.truth) <= 3.0;
    return {hits == 0 && ssaid_ok,
            std::to_string(hits) + "/50 thresholds succeed (closest count off by " +
                std::to_string(best_gap) + "), SSAID " + (ssaid_ok ? "succeeds" : "fails")};
}

bench::ExperimentConfig two_event_config() {
    sim::SseSignalSpec spec;
    spec.length = 480;
    spec.n_events = 2;
    spec.event_starts = {40, 420};
    spec.inter_event_slope = 0.5;
    spec.event_amplitudes = {50.0, 250.0};
    bench::ExperimentConfig cfg;
    cfg.signal = spec;
    cfg.noise_grid = {0.05, 0.10, 0.15};
    cfg.seeds_per_level = 20;
    cfg.segment_len = 80;
    return cfg;
}

Outcome criterion8() {
    auto cfg = two_event_config();
    cfg.detector = bench::Detector::ssaid;
    const auto plain = bench::run_sweep(cfg);
    cfg.detector = bench::Detector::ssaid_sliding;
    const auto sliding = bench::run_sweep(cfg);
    bool ok = true;
    for (std::size_t i = 0; i < cfg.noise_grid.size(); ++i) {
        ok = ok && plain.per_level[i].r_sd <= 0.1 && sliding.per_level[i].r_sd >= 0.7;
    }
    return {ok, "plain r_sd " + rates(plain) + "; sliding r_sd " + rates(sliding)};
}

Outcome criterion9() {
    bench::ExperimentConfig cfg;
    // Spans the plateau, the fall-off and the floor of the success curve.
    cfg.noise_grid = {0.5, 0.9, 1.3, 1.7, 2.1};
    cfg.seeds_per_level = 20;
    cfg.ssaid = SsaidConfig::desk();
    const auto q = bench::sensitivity_sweep(bench::SweepParam::Q, {30, 50}, cfg);
    const auto l = bench::sensitivity_sweep(bench::SweepParam::L, {30, 60}, cfg);
    const double dq = q.consecutive_max_diff.at(0);
    const double dl = l.consecutive_max_diff.at(0);
    return {dq <= 0.1 && dl <= 0.1,
            fmt("Q30 vs Q50 %.2f", dq) + fmt(", L30 vs L60 %.2f", dl) + " (Q30 " +
                rates(q.reports[0].second) + "; L60 " + rates(l.reports[1].second) + ")"};
}

Outcome criterion10() {
    using tools::Json;
    const auto root = fs::temp_directory_path() / "ssaid_acceptance_determinism";
    fs::remove_all(root);
    const std::string stamp = "2024-01-01T00:00:00Z";

    auto sim = tools::default_settings("simulate");
    sim["noise"] = 0.15;
    sim["seed"] = 10;
    sim["signal"]["length"] = 240;
    sim["signal"]["n_events"] = 3;
    tools::run_command(sim, {root / "input", stamp});
    const auto input = (root / "input" / "sim.csv").string();

    std::vector<Json> runs;
    for (const char* command : {"detect", "detect-sliding"}) {
        auto s = tools::default_settings(command, "desk");
        s["input"] = input;
        s["ssaid"]["noise_levels"] = 6;
        s["ssaid"]["realizations"] = 8;
        s["ssaid"]["seed"] = 4;
        runs.push_back(s);
    }
    auto base = tools::default_settings("baseline");
    base["input"] = input;
    runs.push_back(base);
    runs.push_back(sim);
    for (const char* command : {"snl-scan", "bench"}) {
        auto s = tools::default_settings(command, "desk");
        s["experiment"]["detector"] = "id";
        s["experiment"]["noise_grid"] = {0.1, 0.3};
        s["experiment"]["seeds_per_level"] = 4;
        if (std::string(command) == "bench") {
            s["experiment"]["detector"] = "ssaid";
            s["experiment"]["ssaid"]["noise_levels"] = 3;
            s["experiment"]["seeds_per_level"] = 2;
            s["values"] = {2, 3};
        }
        runs.push_back(s);
    }
    auto cal = tools::default_settings("calibrate");
    cal["seeds"] = 20;
    runs.push_back(cal);

    std::size_t files = 0;
    std::vector<std::string> mismatches;
    const int threads = omp_get_max_threads();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto first = root / ("run" + std::to_string(i));
        omp_set_num_threads(1);
        tools::run_command(runs[i], {first, stamp});
        fs::path manifest;
        for (const auto& e : fs::directory_iterator(first)) {
            if (e.path().filename().string().ends_with("manifest.json")) {
                manifest = e.path();
            }
        }
        for (int t : {1, 4}) {
            omp_set_num_threads(t);
            const auto again = root / ("replay" + std::to_string(i) + "_" + std::to_string(t));
            tools::replay(manifest, again);
            for (const auto& e : fs::directory_iterator(first)) {
                const auto other = again / e.path().filename();
                ++files;
                if (!fs::exists(other) || tools::read_file(e.path()) != tools::read_file(other)) {
                    mismatches.push_back(e.path().filename().string());
                }
            }
        }
    }
    omp_set_num_threads(threads);
    fs::remove_all(root);
    std::string detail = std::to_string(files - mismatches.size()) + "/" + std::to_string(files) +
                         " replayed files byte-identical at 1 and 4 threads";
    for (const auto& m : mismatches) {
        detail += " [" + m + "]";
    }
    return {mismatches.empty(), detail};
}

} // namespace

int main(int argc, char** argv) {
    // Optional criterion numbers restrict the run, e.g. "acceptance 1 2".
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        only.push_back(std::atoi(argv[i]));
    }
    const std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int number = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = checks[i]();
        } catch (const std::exception& e) {
            out = {false, std::string("error: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d: %s  %s (%.1f s)\n", number, out.pass ? "PASS" : "FAIL",
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !out.pass;
    }
    return failures == 0 ? 0 : 1;
}
