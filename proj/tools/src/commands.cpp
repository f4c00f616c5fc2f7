#include <ssaid_tools/commands.hpp>

#include <ssaid_tools/input.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#ifndef SSAID_VERSION
#define SSAID_VERSION "0.0.0"
#endif

namespace ssaid::tools {

namespace fs = std::filesystem;

namespace {

void check_keys(const Json& settings, std::initializer_list<const char*> allowed) {
    if (!settings.is_object()) {
        throw Error(ErrorKind::input, "settings must be a JSON object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : settings.items()) {
        if (key != "command" && !ok.count(key)) {
            throw Error(ErrorKind::input, "unknown setting '" + key + "'");
        }
    }
}

template <typename T>
T setting(const Json& settings, const char* key) {
    const auto it = settings.find(key);
    if (it == settings.end()) {
        throw Error(ErrorKind::input, std::string("missing setting '") + key + "'");
    }
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::input, std::string("setting '") + key + "' has the wrong type");
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw Error(ErrorKind::input, "cannot write " + path.string());
    }
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

struct Manifest {
    std::string command;
    std::optional<std::string> input;
    std::optional<std::string> input_hash;
    std::optional<std::string> component;
    std::optional<std::string> detector;
    std::uint64_t master_seed = 0;
};

void write_manifest(const fs::path& path, const Manifest& m, const Json& settings,
                    const RunInfo& info) {
    auto opt = [](const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); };
    Json j = {{"tool", "ssaid"},
              {"version", SSAID_VERSION},
              {"command", m.command},
              {"input", opt(m.input)},
              {"input_fnv1a64", opt(m.input_hash)},
              {"component", opt(m.component)},
              {"detector", opt(m.detector)},
              {"master_seed", m.master_seed},
              {"timestamp", info.timestamp},
              {"settings", settings}};
    write_json(path, j);
}

Json group_json(const GroupStats& g, bool in_snl) {
    return {{"window", g.window},
            {"k", g.k},
            {"s", g.s},
            {"a_s", g.a_s},
            {"h_mode", g.h_mode},
            {"r2", g.r2},
            {"kappa", g.kappa},
            {"omega3", g.omega3 ? Json(*g.omega3) : Json(nullptr)},
            {"locations", g.locations},
            {"degenerate", g.degenerate},
            {"in_snl", in_snl}};
}

std::string changepoints_csv(const DetectionResult& d, const std::vector<double>& times,
                             const std::string& component) {
    std::string out = "index,time,component\n";
    for (Index loc : d.locations) {
        out += std::to_string(loc) + "," + format_number(times[static_cast<std::size_t>(loc)]) +
               "," + component + "\n";
    }
    return out;
}

struct Loaded {
    Observations obs;
    std::string path;
    std::string hash;
    std::string component_label;
};

Loaded load_input(const Json& settings) {
    const auto path = setting<std::string>(settings, "input");
    if (path.empty()) {
        throw Error(ErrorKind::input, "no input file given (--input)");
    }
    const auto component = parse_component(setting<std::string>(settings, "component"));
    const auto bytes = read_file(path);
    Loaded in{parse_observations(bytes, component, fs::path(path).stem().string()), path,
              fnv1a_hex(bytes), ""};
    in.component_label = in.obs.format == "gps" ? to_string(component) : "value";
    return in;
}

Json input_json(const Loaded& in) {
    return {{"path", in.path},
            {"format", in.obs.format},
            {"station", in.obs.station_id},
            {"length", in.obs.series.size()},
            {"dt", in.obs.series.dt()},
            {"day_gaps", in.obs.gap_count}};
}

void run_detect(const Json& settings, const RunInfo& info, bool sliding) {
    if (sliding) {
        check_keys(settings, {"input", "component", "ssaid", "segment_len"});
    } else {
        check_keys(settings, {"input", "component", "ssaid"});
    }
    SsaidConfig cfg;
    from_json(settings.at("ssaid"), cfg);
    const auto in = load_input(settings);

    SsaidResult result;
    if (sliding) {
        result = detect_sliding(in.obs.series, cfg, setting<std::size_t>(settings, "segment_len"));
    } else {
        result = detect(in.obs.series, cfg);
    }

    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> chosen;
    for (const auto& g : result.in_snl_groups) {
        chosen.emplace(g.window, g.k, g.s);
    }
    Json groups = Json::array();
    for (const auto& g : result.all_groups) {
        groups.push_back(group_json(g, chosen.count({g.window, g.k, g.s}) > 0));
    }
    Json diag = {{"input", input_json(in)},
                 {"detection", result.detection.locations},
                 {"count", result.detection.count()},
                 {"in_snl_count", result.in_snl_groups.size()},
                 {"warnings", result.warnings},
                 {"all_groups", groups}};

    write_text(info.out_dir / "changepoints.csv",
               changepoints_csv(result.detection, in.obs.times, in.component_label));
    write_json(info.out_dir / "diagnostics.json", diag);
    write_manifest(info.out_dir / "manifest.json",
                   {sliding ? "detect-sliding" : "detect", in.path, in.hash,
                    setting<std::string>(settings, "component"),
                    sliding ? "ssaid_sliding" : "ssaid", cfg.seed},
                   settings, info);
}

void run_simulate(const Json& settings, const RunInfo& info) {
    check_keys(settings, {"signal", "noise", "seed", "out"});
    bench::SignalSpec spec = sim::SseSignalSpec{};
    from_json(settings.at("signal"), spec);
    const auto level = setting<double>(settings, "noise");
    const auto seed = setting<std::uint64_t>(settings, "seed");
    const fs::path name = setting<std::string>(settings, "out");
    if (name.empty() || name.has_parent_path()) {
        throw Error(ErrorKind::input, "simulate output must be a plain file name");
    }

    const auto clean = bench::make_signal(spec);
    const auto noisy = sim::add_noise(clean.signal, {level, seed});

    std::string csv = "t,value\n";
    for (std::size_t t = 0; t < noisy.size(); ++t) {
        csv += std::to_string(t) + "," + format_number(noisy[t]) + "\n";
    }
    std::string truth = "index\n";
    for (Index loc : clean.truth.locations) {
        truth += std::to_string(loc) + "\n";
    }
    const auto stem = name.stem().string();
    write_text(info.out_dir / name, csv);
    write_text(info.out_dir / (stem + ".truth.csv"), truth);
    write_manifest(info.out_dir / (stem + ".manifest.json"),
                   {"simulate", std::nullopt, std::nullopt, std::nullopt, std::nullopt, seed},
                   settings, info);
}

void run_baseline(const Json& settings, const RunInfo& info) {
    check_keys(settings, {"input", "component", "aic"});
    baseline::AicConfig cfg;
    from_json(settings.at("aic"), cfg);
    cfg.validate();
    const auto in = load_input(settings);

    const auto delta = baseline::delta_aic_series(in.obs.series, cfg);
    std::string csv = "index,time,delta_aic\n";
    for (std::size_t t = 0; t < delta.size(); ++t) {
        if (delta[t]) {
            csv += std::to_string(t) + "," + format_number(in.obs.times[t]) + "," +
                   format_number(*delta[t]) + "\n";
        }
    }
    const auto found = baseline::threshold_detect(delta, cfg.threshold);
    write_text(info.out_dir / "delta_aic.csv", csv);
    write_text(info.out_dir / "changepoints.csv",
               changepoints_csv(found, in.obs.times, in.component_label));
    write_manifest(info.out_dir / "manifest.json",
                   {"baseline", in.path, in.hash, setting<std::string>(settings, "component"),
                    "baseline", 0},
                   settings, info);
}

std::string trial_rows(const bench::SnlReport& report, const std::string& prefix) {
    std::string out;
    for (const auto& t : report.trials) {
        out += prefix + format_number(t.level) + "," + std::to_string(t.trial) + "," +
               std::to_string(t.seed) + "," + std::to_string(t.detected_count) + "," +
               (t.rmse ? format_number(*t.rmse) : std::string()) + "," +
               (t.success ? "1" : "0") + "\n";
    }
    return out;
}

Json report_json(const bench::SnlReport& report) {
    Json levels = Json::array();
    for (const auto& l : report.per_level) {
        levels.push_back({{"level", l.level},
                          {"r_sd", l.r_sd},
                          {"r1", l.r1},
                          {"mean_rmse_when_correct", l.mean_rmse_when_correct
                                                         ? Json(*l.mean_rmse_when_correct)
                                                         : Json(nullptr)}});
    }
    Json interval = nullptr;
    if (report.snl_interval) {
        interval = {report.snl_interval->first, report.snl_interval->second};
    }
    return {{"seeds_per_level", report.seeds_per_level},
            {"snl_interval", interval},
            {"per_level", levels}};
}

bench::ExperimentConfig experiment_from(const Json& settings) {
    bench::ExperimentConfig cfg;
    from_json(settings.at("experiment"), cfg);
    cfg.validate();
    return cfg;
}

void run_snl_scan(const Json& settings, const RunInfo& info) {
    check_keys(settings, {"experiment"});
    const auto cfg = experiment_from(settings);
    const auto report = bench::run_sweep(cfg);
    write_text(info.out_dir / "trials.csv",
               "level,trial,seed,detected_count,rmse,success\n" + trial_rows(report, ""));
    write_json(info.out_dir / "summary.json", report_json(report));
    write_manifest(info.out_dir / "manifest.json",
                   {"snl-scan", std::nullopt, std::nullopt, std::nullopt, to_string(cfg.detector),
                    cfg.master_seed},
                   settings, info);
}

void run_bench(const Json& settings, const RunInfo& info) {
    check_keys(settings, {"experiment", "param", "values"});
    const auto cfg = experiment_from(settings);
    const auto name = setting<std::string>(settings, "param");
    if (name != "Q" && name != "L") {
        throw Error(ErrorKind::input, "bench param must be Q or L");
    }
    const auto param = name == "Q" ? bench::SweepParam::Q : bench::SweepParam::L;
    const auto values = setting<std::vector<std::size_t>>(settings, "values");
    const auto sens = bench::sensitivity_sweep(param, values, cfg);

    std::string csv = "param,value,level,trial,seed,detected_count,rmse,success\n";
    Json reports = Json::array();
    for (const auto& [value, report] : sens.reports) {
        csv += trial_rows(report, name + "," + std::to_string(value) + ",");
        Json r = report_json(report);
        r["value"] = value;
        reports.push_back(r);
    }
    write_text(info.out_dir / "trials.csv", csv);
    write_json(info.out_dir / "summary.json", {{"param", name},
                                               {"reports", reports},
                                               {"consecutive_max_diff", sens.consecutive_max_diff}});
    write_manifest(info.out_dir / "manifest.json",
                   {"bench", std::nullopt, std::nullopt, std::nullopt, to_string(cfg.detector),
                    cfg.master_seed},
                   settings, info);
}

void run_calibrate(const Json& settings, const RunInfo& info) {
    check_keys(settings, {"constants", "length", "seeds", "master_seed", "id"});
    id::IdConfig base;
    from_json(settings.at("id"), base);
    const auto seed = setting<std::uint64_t>(settings, "master_seed");
    const auto rows = bench::calibrate_threshold(setting<std::vector<double>>(settings, "constants"),
                                                 setting<std::size_t>(settings, "length"),
                                                 setting<std::size_t>(settings, "seeds"), seed, base);
    std::string csv = "threshold_const,false_positive_rate\n";
    for (const auto& r : rows) {
        csv += format_number(r.threshold_const) + "," + format_number(r.false_positive_rate) + "\n";
    }
    write_text(info.out_dir / "calibration.csv", csv);
    write_manifest(info.out_dir / "manifest.json",
                   {"calibrate", std::nullopt, std::nullopt, std::nullopt, "id", seed}, settings,
                   info);
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"detect",   "detect-sliding", "simulate",
                                                   "baseline", "snl-scan",       "bench",
                                                   "calibrate"};
    return names;
}

Json default_settings(std::string_view command, std::string_view preset) {
    SsaidConfig ssaid;
    if (preset == "paper") {
        ssaid = SsaidConfig::paper();
    } else if (preset == "desk") {
        ssaid = SsaidConfig::desk();
    } else {
        throw Error(ErrorKind::input, "unknown preset '" + std::string(preset) +
                                          "' (expected paper or desk)");
    }
    Json j = {{"command", std::string(command)}};
    if (command == "detect" || command == "detect-sliding") {
        j["input"] = "";
        j["component"] = "east";
        j["ssaid"] = to_json(ssaid);
        if (command == "detect-sliding") {
            j["segment_len"] = 80;
        }
    } else if (command == "simulate") {
        j["signal"] = to_json(sim::SseSignalSpec{});
        j["noise"] = 0.0;
        j["seed"] = 0;
        j["out"] = "sim.csv";
    } else if (command == "baseline") {
        j["input"] = "";
        j["component"] = "east";
        j["aic"] = to_json(baseline::AicConfig{});
    } else if (command == "snl-scan" || command == "bench") {
        bench::ExperimentConfig cfg;
        cfg.ssaid = ssaid;
        for (int i = 1; i <= 16; ++i) {
            cfg.noise_grid.push_back(0.05 * i);
        }
        j["experiment"] = to_json(cfg);
        if (command == "bench") {
            j["param"] = "Q";
            j["values"] = {10, 30, 50};
        }
    } else if (command == "calibrate") {
        j["constants"] = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5};
        j["length"] = 365;
        j["seeds"] = 200;
        j["master_seed"] = 1;
        j["id"] = to_json(id::IdConfig{});
    } else {
        throw Error(ErrorKind::input, "unknown command '" + std::string(command) + "'");
    }
    return j;
}

void run_command(const Json& settings, const RunInfo& info) {
    const auto command = setting<std::string>(settings, "command");
    if (command == "detect") {
        run_detect(settings, info, false);
    } else if (command == "detect-sliding") {
        run_detect(settings, info, true);
    } else if (command == "simulate") {
        run_simulate(settings, info);
    } else if (command == "baseline") {
        run_baseline(settings, info);
    } else if (command == "snl-scan") {
        run_snl_scan(settings, info);
    } else if (command == "bench") {
        run_bench(settings, info);
    } else if (command == "calibrate") {
        run_calibrate(settings, info);
    } else {
        throw Error(ErrorKind::input, "unknown command '" + command + "'");
    }
}

void replay(const fs::path& manifest, const fs::path& out_dir) {
    Json m;
    try {
        m = Json::parse(read_file(manifest));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::input, manifest.string() + ": " + e.what());
    }
    if (!m.is_object() || !m.contains("settings") || !m.contains("timestamp")) {
        throw Error(ErrorKind::input, manifest.string() + " is not a run manifest");
    }
    if (m.contains("input") && m["input"].is_string()) {
        const auto hash = fnv1a_hex(read_file(m["input"].get<std::string>()));
        if (m.value("input_fnv1a64", std::string()) != hash) {
            throw Error(ErrorKind::input, "input " + m["input"].get<std::string>() +
                                              " differs from the one recorded in the manifest");
        }
    }
    run_command(m["settings"], {out_dir, m["timestamp"].get<std::string>()});
}

std::string current_timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    }
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace ssaid::tools
