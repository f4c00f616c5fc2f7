// ssaid command-line tool. Settings are resolved in three layers: preset
// defaults, then an optional JSON config file, then individual flags.

#include <ssaid_tools/commands.hpp>
#include <ssaid_tools/input.hpp>

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

namespace {

using ssaid::tools::Json;

// Flag values recorded as JSON-pointer overrides, applied after the config
// file so that flags always win.
struct Overrides {
    std::vector<std::pair<std::string, Json>> entries;

    template <typename T>
    CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& pointer,
                     const std::string& help) {
        return app->add_option_function<T>(
            flag, [this, pointer](const T& v) { entries.emplace_back(pointer, Json(v)); }, help);
    }

    void apply(Json& settings) const {
        for (const auto& [pointer, value] : entries) {
            settings[Json::json_pointer(pointer)] = value;
        }
    }
};

struct Command {
    CLI::App* app = nullptr;
    std::string name;
};

void add_ssaid_flags(CLI::App* app, Overrides& o, const std::string& root) {
    o.add<std::uint64_t>(app, "--seed", root + "/seed", "master seed of the noise ensemble");
    o.add<std::size_t>(app, "--m", root + "/components", "SSA components M");
    o.add<std::size_t>(app, "--l", root + "/noise_levels", "noise levels L");
    o.add<std::size_t>(app, "--q", root + "/realizations", "realizations per level Q");
    o.add<double>(app, "--v", root + "/rmse_threshold", "in-SNL RMSE threshold v (samples)");
    o.add<std::size_t>(app, "--ssa-window", root + "/window", "SSA embedding window (0 = auto)");
    o.add<double>(app, "--noise-factor", root + "/noise_max_factor",
                  "top of the injected noise grid, in input std units");
    o.add<double>(app, "--threshold-const", root + "/id/threshold_const",
                  "Isolate-Detect threshold constant C");
}

void add_signal_flags(CLI::App* app, Overrides& o, const std::string& root) {
    o.add<std::size_t>(app, "--length", root + "/length", "signal length in days");
    o.add<std::size_t>(app, "--events", root + "/n_events", "number of events");
    o.add<double>(app, "--duration", root + "/event_duration", "event duration in days");
    o.add<double>(app, "--recurrence", root + "/recurrence", "days between event starts");
    o.add<double>(app, "--slope", root + "/inter_event_slope", "background trend per day");
    o.add<std::vector<double>>(app, "--amplitude", root + "/event_amplitudes",
                               "event amplitudes (one, or one per event)")
        ->delimiter(',');
    o.add<std::string>(app, "--ramp", root + "/ramp",
                       "smooth_sigmoid, quadratic_ease or linear");
    o.add<double>(app, "--first-start", root + "/first_start", "start of the first event");
    o.add<std::vector<double>>(app, "--starts", root + "/event_starts", "explicit event starts")
        ->delimiter(',');
}

int run(int argc, char** argv) {
    CLI::App app{"Change-point detection for piecewise non-linear signals (SSA + Isolate-Detect)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SSAID_VERSION);

    std::string config_path;
    std::string preset; // empty: paper for detection, desk for experiments
    std::string out_dir = ".";
    int threads = 0;
    Overrides o;
    std::vector<Command> commands;

    auto common = [&](CLI::App* sub, bool has_preset) {
        sub->add_option("--config", config_path, "JSON settings file")->check(CLI::ExistingFile);
        sub->add_option("--out-dir", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads (0 = runtime default)")
            ->check(CLI::NonNegativeNumber);
        if (has_preset) {
            sub->add_option("--preset", preset, "ensemble size preset")
                ->check(CLI::IsMember({"paper", "desk"}));
        }
        commands.push_back({sub, sub->get_name()});
    };
    auto input_flags = [&](CLI::App* sub) {
        o.add<std::string>(sub, "--input", "/input", "t,value CSV or GPS daily-solution file");
        o.add<std::string>(sub, "--component", "/component", "GPS component")
            ->check(CLI::IsMember({"north", "east", "up"}));
    };

    auto* det = app.add_subcommand("detect", "run SSAID on one series");
    common(det, true);
    input_flags(det);
    add_ssaid_flags(det, o, "/ssaid");

    auto* slide = app.add_subcommand("detect-sliding", "run sliding-window SSAID on one series");
    common(slide, true);
    input_flags(slide);
    add_ssaid_flags(slide, o, "/ssaid");
    o.add<std::size_t>(slide, "--segment-len", "/segment_len", "segment length L_s");

    auto* simulate = app.add_subcommand("simulate", "write a synthetic slow-slip-like series");
    common(simulate, false);
    add_signal_flags(simulate, o, "/signal");
    o.add<double>(simulate, "--noise", "/noise", "white-noise std C_wn (signal has unit std)");
    o.add<std::uint64_t>(simulate, "--seed", "/seed", "noise seed");
    std::string sim_out;
    simulate->add_option("--out", sim_out, "output CSV path");

    auto* base = app.add_subcommand("baseline", "sliding-window AIC change-point baseline");
    common(base, false);
    input_flags(base);
    o.add<std::size_t>(base, "--window", "/aic/window", "even window length w");
    o.add<double>(base, "--zeta", "/aic/threshold", "detection threshold on dAIC");

    auto experiment_flags = [&](CLI::App* sub) {
        add_signal_flags(sub, o, "/experiment/signal");
        add_ssaid_flags(sub, o, "/experiment/ssaid");
        o.add<std::string>(sub, "--detector", "/experiment/detector",
                           "id, ssaid, ssaid_sliding or baseline");
        o.add<std::vector<double>>(sub, "--levels", "/experiment/noise_grid", "noise levels C_wn")
            ->delimiter(',');
        o.add<std::size_t>(sub, "--seeds", "/experiment/seeds_per_level", "trials per level");
        o.add<std::uint64_t>(sub, "--master-seed", "/experiment/master_seed", "sweep seed");
        o.add<double>(sub, "--success-v", "/experiment/v", "success RMSE bound (samples)");
        o.add<std::size_t>(sub, "--segment-len", "/experiment/segment_len", "segment length L_s");
        o.add<double>(sub, "--id-threshold-const", "/experiment/id/threshold_const",
                      "threshold constant of the direct ID detector");
        o.add<std::size_t>(sub, "--window", "/experiment/aic/window", "baseline window");
        o.add<double>(sub, "--zeta", "/experiment/aic/threshold", "baseline threshold");
    };

    auto* scan = app.add_subcommand("snl-scan", "success rate over a noise grid");
    common(scan, true);
    experiment_flags(scan);

    auto* bench = app.add_subcommand("bench", "sensitivity of the success curve to Q or L");
    common(bench, true);
    experiment_flags(bench);
    o.add<std::string>(bench, "--param", "/param", "Q or L")->check(CLI::IsMember({"Q", "L"}));
    o.add<std::vector<std::size_t>>(bench, "--values", "/values", "parameter values")
        ->delimiter(',');

    auto* calib = app.add_subcommand("calibrate", "null false-positive rate of Isolate-Detect");
    common(calib, false);
    o.add<std::vector<double>>(calib, "--constants", "/constants", "threshold constants C")
        ->delimiter(',');
    o.add<std::size_t>(calib, "--length", "/length", "series length");
    o.add<std::size_t>(calib, "--seeds", "/seeds", "pure-noise series per constant");
    o.add<std::uint64_t>(calib, "--master-seed", "/master_seed", "noise seed");

    auto* rep = app.add_subcommand("replay", "re-run a recorded manifest");
    std::string manifest;
    rep->add_option("manifest", manifest, "manifest.json of an earlier run")
        ->required()
        ->check(CLI::ExistingFile);
    rep->add_option("--out-dir", out_dir, "output directory")->required();
    rep->add_option("--threads", threads, "worker threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (threads > 0) {
        omp_set_num_threads(threads);
    }

    if (rep->parsed()) {
        ssaid::tools::replay(manifest, out_dir);
        return 0;
    }
    for (const auto& c : commands) {
        if (!c.app->parsed()) {
            continue;
        }
        const bool experiment = c.name == "snl-scan" || c.name == "bench";
        const std::string chosen = !preset.empty() ? preset : experiment ? "desk" : "paper";
        Json settings = ssaid::tools::default_settings(c.name, chosen);
        if (!config_path.empty()) {
            Json file;
            try {
                file = Json::parse(ssaid::tools::read_file(config_path));
            } catch (const nlohmann::json::parse_error& e) {
                throw ssaid::Error(ssaid::ErrorKind::input, config_path + ": " + e.what());
            }
            file.erase("command");
            ssaid::tools::merge_into(settings, file);
        }
        o.apply(settings);
        std::filesystem::path dir = out_dir;
        if (c.name == "simulate" && !sim_out.empty()) {
            const std::filesystem::path p = sim_out;
            // Relative --out paths resolve against --out-dir.
            dir = dir / p.parent_path();
            settings["out"] = p.filename().string();
        }
        ssaid::tools::run_command(settings, {dir, ssaid::tools::current_timestamp()});
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ssaid::Error& e) {
        std::cerr << "ssaid: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "ssaid: invalid settings: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "ssaid: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ssaid: internal error: " << e.what() << '\n';
        return 3;
    }
}
