#include <ssaid_tools/input.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ssaid::tools {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> fields;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' ||
                                   line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' &&
               line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

// Splits into data lines, collecting "# station: ID" along the way.
std::vector<Line> data_lines(std::string_view text, std::string& station) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto body = trim(line.substr(1));
            constexpr std::string_view key = "station:";
            if (body.substr(0, key.size()) == key) {
                station = std::string(trim(body.substr(key.size())));
            }
            continue;
        }
        out.push_back({number, split_fields(line)});
    }
    return out;
}

bool try_number(std::string_view field, double& out) {
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

Error parse_error(std::size_t line, const std::string& what) {
    return Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

std::vector<double> numeric_row(const Line& line) {
    std::vector<double> row;
    for (auto f : line.fields) {
        double v = 0.0;
        if (!try_number(f, v)) {
            throw parse_error(line.number, "not a number: '" + std::string(f) + "'");
        }
        row.push_back(v);
    }
    return row;
}

bool is_integral(double v) { return v == std::floor(v) && std::abs(v) < 1e9; }

long day_number(int year, int doy) {
    using namespace std::chrono;
    const sys_days jan1{std::chrono::year{year} / January / 1};
    return static_cast<long>(jan1.time_since_epoch().count()) + doy - 1;
}

GpsRecordFile gps_from_lines(const std::vector<Line>& lines, std::string station) {
    GpsRecordFile file;
    file.station_id = std::move(station);
    for (const auto& line : lines) {
        if (line.fields.size() != 6) {
            throw parse_error(line.number, "expected 6 columns, found " +
                                               std::to_string(line.fields.size()));
        }
        const auto v = numeric_row(line);
        if (!is_integral(v[1]) || !is_integral(v[2])) {
            throw parse_error(line.number, "year and day of year must be integers");
        }
        GpsRow row{v[0], static_cast<int>(v[1]), static_cast<int>(v[2]), v[3], v[4], v[5]};
        if (row.day_of_year < 1 || row.day_of_year > 366) {
            throw parse_error(line.number, "day of year out of range [1, 366]");
        }
        if (!file.rows.empty() && !(row.decimal_year > file.rows.back().decimal_year)) {
            throw parse_error(line.number, "decimal year is not strictly increasing");
        }
        if (!file.rows.empty()) {
            const auto& prev = file.rows.back();
            const long step = day_number(row.year, row.day_of_year) -
                              day_number(prev.year, prev.day_of_year);
            if (step > 1) {
                file.gaps.emplace_back(file.rows.size(), static_cast<int>(step - 1));
            }
        }
        file.rows.push_back(row);
    }
    return file;
}

double median_spacing(const std::vector<double>& t) {
    if (t.size() < 2) {
        return 1.0;
    }
    std::vector<double> d(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        d[i] = t[i + 1] - t[i];
    }
    return median(d);
}

} // namespace

Component parse_component(std::string_view name) {
    if (name == "north") {
        return Component::north;
    }
    if (name == "east") {
        return Component::east;
    }
    if (name == "up") {
        return Component::up;
    }
    throw Error(ErrorKind::input, "unknown component '" + std::string(name) +
                                      "' (expected north, east or up)");
}

std::string to_string(Component c) {
    switch (c) {
    case Component::north:
        return "north";
    case Component::east:
        return "east";
    case Component::up:
        return "up";
    }
    return "east";
}

GpsRecordFile parse_gps(std::string_view text, std::string station_id) {
    std::string station = std::move(station_id);
    const auto lines = data_lines(text, station);
    if (lines.empty()) {
        throw Error(ErrorKind::input, "GPS file contains no records");
    }
    return gps_from_lines(lines, station);
}

std::string format_gps(const GpsRecordFile& file) {
    std::ostringstream out;
    if (!file.station_id.empty()) {
        out << "# station: " << file.station_id << '\n';
    }
    char buf[160];
    for (const auto& r : file.rows) {
        std::snprintf(buf, sizeof buf, "%.4f %d %d %.2f %.2f %.2f\n", r.decimal_year, r.year,
                      r.day_of_year, r.north_mm, r.east_mm, r.up_mm);
        out << buf;
    }
    return out.str();
}

Observations parse_observations(std::string_view text, Component component,
                                std::string station_id) {
    std::string station = std::move(station_id);
    auto lines = data_lines(text, station);
    if (lines.empty()) {
        throw Error(ErrorKind::input, "input contains no observations");
    }
    // A header is any first line with a non-numeric field.
    double probe = 0.0;
    const bool header = std::any_of(lines.front().fields.begin(), lines.front().fields.end(),
                                    [&](std::string_view f) { return !try_number(f, probe); });
    if (header) {
        lines.erase(lines.begin());
        if (lines.empty()) {
            throw Error(ErrorKind::input, "input contains a header but no observations");
        }
    }
    const std::size_t columns = lines.front().fields.size();

    std::vector<double> times;
    std::vector<double> values;
    Observations obs{TimeSeries({0.0}), {}, "csv", station, 0};
    if (columns == 6 && !header) {
        const auto file = gps_from_lines(lines, station);
        for (const auto& r : file.rows) {
            times.push_back(r.decimal_year);
            values.push_back(component == Component::north ? r.north_mm
                             : component == Component::east ? r.east_mm
                                                            : r.up_mm);
        }
        obs.format = "gps";
        obs.station_id = file.station_id;
        obs.gap_count = file.gaps.size();
    } else if (columns == 2) {
        for (const auto& line : lines) {
            if (line.fields.size() != 2) {
                throw parse_error(line.number, "expected 2 columns, found " +
                                                   std::to_string(line.fields.size()));
            }
            const auto v = numeric_row(line);
            if (!times.empty() && !(v[0] > times.back())) {
                throw parse_error(line.number, "time column is not strictly increasing");
            }
            times.push_back(v[0]);
            values.push_back(v[1]);
        }
    } else {
        throw parse_error(lines.front().number,
                          "expected 2 (t,value) or 6 (GPS) columns, found " +
                              std::to_string(columns));
    }
    const double dt = median_spacing(times);
    obs.series = TimeSeries(std::move(values), dt, times.front());
    obs.times = std::move(times);
    return obs;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::input, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Observations read_observations(const std::filesystem::path& path, Component component) {
    return parse_observations(read_file(path), component, path.stem().string());
}

} // namespace ssaid::tools
