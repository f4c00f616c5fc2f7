#include <ssaid_tools/settings.hpp>

#include <set>

namespace ssaid::tools {

namespace {

// Reads the keys of one JSON object and rejects anything it was not asked for.
class Fields {
public:
    Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j.is_object()) {
            throw Error(ErrorKind::input, where_ + ": expected an object");
        }
    }

    ~Fields() noexcept(false) {
        if (std::uncaught_exceptions() > 0) {
            return;
        }
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) {
                throw Error(ErrorKind::input, where_ + ": unknown key '" + key + "'");
            }
        }
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) {
            return;
        }
        try {
            out = it->template get<T>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorKind::input, where_ + "." + key + ": wrong type");
        }
    }

    template <typename T>
    void get(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) {
            return;
        }
        if (it->is_null()) {
            out.reset();
            return;
        }
        T value{};
        get(key, value);
        out = value;
    }

    const Json* sub(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const std::string& where() const { return where_; }

private:
    const Json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::string ramp_name(sim::RampShape r) {
    switch (r) {
    case sim::RampShape::smooth_sigmoid:
        return "smooth_sigmoid";
    case sim::RampShape::quadratic_ease:
        return "quadratic_ease";
    case sim::RampShape::linear:
        return "linear";
    }
    return "smooth_sigmoid";
}

sim::RampShape parse_ramp(const std::string& name) {
    if (name == "smooth_sigmoid") {
        return sim::RampShape::smooth_sigmoid;
    }
    if (name == "quadratic_ease") {
        return sim::RampShape::quadratic_ease;
    }
    if (name == "linear") {
        return sim::RampShape::linear;
    }
    throw Error(ErrorKind::input, "unknown ramp shape '" + name + "'");
}

std::string family_name(sim::Family f) {
    switch (f) {
    case sim::Family::piecewise_linear:
        return "piecewise_linear";
    case sim::Family::piecewise_quadratic:
        return "piecewise_quadratic";
    case sim::Family::piecewise_exponential:
        return "piecewise_exponential";
    case sim::Family::sinusoidal:
        return "sinusoidal";
    }
    return "piecewise_linear";
}

sim::Family parse_family(const std::string& name) {
    for (auto f : {sim::Family::piecewise_linear, sim::Family::piecewise_quadratic,
                   sim::Family::piecewise_exponential, sim::Family::sinusoidal}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw Error(ErrorKind::input, "unknown signal family '" + name + "'");
}

} // namespace

std::string to_string(bench::Detector d) {
    switch (d) {
    case bench::Detector::id_direct:
        return "id";
    case bench::Detector::ssaid:
        return "ssaid";
    case bench::Detector::ssaid_sliding:
        return "ssaid_sliding";
    case bench::Detector::baseline:
        return "baseline";
    }
    return "ssaid";
}

bench::Detector parse_detector(std::string_view name) {
    for (auto d : {bench::Detector::id_direct, bench::Detector::ssaid,
                   bench::Detector::ssaid_sliding, bench::Detector::baseline}) {
        if (to_string(d) == name) {
            return d;
        }
    }
    throw Error(ErrorKind::input, "unknown detector '" + std::string(name) +
                                      "' (expected id, ssaid, ssaid_sliding or baseline)");
}

void merge_into(Json& base, const Json& overlay) {
    if (!base.is_object() || !overlay.is_object()) {
        base = overlay;
        return;
    }
    for (const auto& [key, value] : overlay.items()) {
        if (base.contains(key)) {
            merge_into(base[key], value);
        } else {
            base[key] = value;
        }
    }
}

Json to_json(const id::IdConfig& c) {
    return {{"threshold_const", c.threshold_const},
            {"expansion_step", c.expansion_step},
            {"min_gap", c.min_gap},
            {"sigma", optional_json(c.sigma)}};
}

void from_json(const Json& j, id::IdConfig& c) {
    Fields f(j, "id");
    f.get("threshold_const", c.threshold_const);
    f.get("expansion_step", c.expansion_step);
    f.get("min_gap", c.min_gap);
    f.get("sigma", c.sigma);
}

Json to_json(const SsaidConfig& c) {
    return {{"window", c.ssa.window},
            {"components", c.ssa.num_components},
            {"noise_levels", c.noise_levels},
            {"realizations", c.realizations},
            {"rmse_threshold", c.rmse_threshold},
            {"noise_max_factor", c.noise_max_factor},
            {"seed", c.seed},
            {"id", to_json(c.id)}};
}

void from_json(const Json& j, SsaidConfig& c) {
    Fields f(j, "ssaid");
    f.get("window", c.ssa.window);
    f.get("components", c.ssa.num_components);
    f.get("noise_levels", c.noise_levels);
    f.get("realizations", c.realizations);
    f.get("rmse_threshold", c.rmse_threshold);
    f.get("noise_max_factor", c.noise_max_factor);
    f.get("seed", c.seed);
    if (const auto* id = f.sub("id")) {
        from_json(*id, c.id);
    }
}

Json to_json(const sim::SseSignalSpec& s) {
    return {{"type", "sse"},
            {"length", s.length},
            {"n_events", s.n_events},
            {"event_duration", s.event_duration},
            {"recurrence", s.recurrence},
            {"inter_event_slope", s.inter_event_slope},
            {"event_amplitudes", s.event_amplitudes},
            {"ramp", ramp_name(s.ramp)},
            {"first_start", optional_json(s.first_start)},
            {"event_starts", s.event_starts}};
}

void from_json(const Json& j, sim::SseSignalSpec& s) {
    Fields f(j, "signal");
    std::string type = "sse";
    f.get("type", type);
    if (type != "sse") {
        throw Error(ErrorKind::input, "signal: expected type 'sse'");
    }
    f.get("length", s.length);
    f.get("n_events", s.n_events);
    f.get("event_duration", s.event_duration);
    f.get("recurrence", s.recurrence);
    f.get("inter_event_slope", s.inter_event_slope);
    f.get("event_amplitudes", s.event_amplitudes);
    std::string ramp = ramp_name(s.ramp);
    f.get("ramp", ramp);
    s.ramp = parse_ramp(ramp);
    f.get("first_start", s.first_start);
    f.get("event_starts", s.event_starts);
}

Json to_json(const sim::FamilySpec& s) {
    Json segments = Json::array();
    for (const auto& seg : s.segments) {
        segments.push_back({{"a", seg.a}, {"b", seg.b}, {"c", seg.c}, {"d", seg.d}});
    }
    return {{"type", "family"},
            {"family", family_name(s.kind)},
            {"length", s.length},
            {"knots", s.knots},
            {"segments", segments},
            {"continuous", false}};
}

void from_json(const Json& j, sim::FamilySpec& s) {
    Fields f(j, "signal");
    std::string type;
    f.get("type", type);
    if (type != "family") {
        throw Error(ErrorKind::input, "signal: expected type 'family'");
    }
    std::string family = family_name(s.kind);
    f.get("family", family);
    s.kind = parse_family(family);
    f.get("length", s.length);
    f.get("knots", s.knots);
    s.segments.clear();
    if (const auto* segs = f.sub("segments")) {
        if (!segs->is_array()) {
            throw Error(ErrorKind::input, "signal.segments: expected an array");
        }
        for (const auto& item : *segs) {
            sim::FamilySegment seg;
            Fields g(item, "signal.segments[]");
            g.get("a", seg.a);
            g.get("b", seg.b);
            g.get("c", seg.c);
            g.get("d", seg.d);
            s.segments.push_back(seg);
        }
    }
    // "continuous": true derives every offset after the first from continuity.
    bool continuous = false;
    f.get("continuous", continuous);
    if (continuous) {
        s = sim::make_continuous(std::move(s));
    }
}

Json to_json(const bench::SignalSpec& s) {
    return std::visit([](const auto& v) { return to_json(v); }, s);
}

void from_json(const Json& j, bench::SignalSpec& s) {
    if (j.is_object() && j.value("type", std::string("sse")) == "family") {
        sim::FamilySpec spec;
        from_json(j, spec);
        s = spec;
        return;
    }
    sim::SseSignalSpec spec = std::holds_alternative<sim::SseSignalSpec>(s)
                                  ? std::get<sim::SseSignalSpec>(s)
                                  : sim::SseSignalSpec{};
    from_json(j, spec);
    s = spec;
}

Json to_json(const baseline::AicConfig& c) {
    return {{"window", c.window}, {"threshold", c.threshold}};
}

void from_json(const Json& j, baseline::AicConfig& c) {
    Fields f(j, "aic");
    f.get("window", c.window);
    f.get("threshold", c.threshold);
}

Json to_json(const bench::ExperimentConfig& c) {
    return {{"signal", to_json(c.signal)},
            {"noise_grid", c.noise_grid},
            {"seeds_per_level", c.seeds_per_level},
            {"detector", to_string(c.detector)},
            {"v", c.v},
            {"id", to_json(c.id)},
            {"ssaid", to_json(c.ssaid)},
            {"segment_len", c.segment_len},
            {"aic", to_json(c.aic)},
            {"master_seed", c.master_seed}};
}

void from_json(const Json& j, bench::ExperimentConfig& c) {
    Fields f(j, "experiment");
    if (const auto* s = f.sub("signal")) {
        from_json(*s, c.signal);
    }
    f.get("noise_grid", c.noise_grid);
    f.get("seeds_per_level", c.seeds_per_level);
    std::string detector = to_string(c.detector);
    f.get("detector", detector);
    c.detector = parse_detector(detector);
    f.get("v", c.v);
    if (const auto* id = f.sub("id")) {
        from_json(*id, c.id);
    }
    if (const auto* s = f.sub("ssaid")) {
        from_json(*s, c.ssaid);
    }
    f.get("segment_len", c.segment_len);
    if (const auto* a = f.sub("aic")) {
        from_json(*a, c.aic);
    }
    f.get("master_seed", c.master_seed);
}

} // namespace ssaid::tools
