#pragma once

// Reading observation files: plain "t,value" CSV and GPS daily-solution
// records (decimal year, year, day of year, north, east, up).

#include <ssaid/core.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ssaid::tools {

enum class Component {
    north,
    east,
    up,
};

Component parse_component(std::string_view name);
std::string to_string(Component c);

struct GpsRow {
    double decimal_year = 0.0;
    int year = 0;
    int day_of_year = 0;
    double north_mm = 0.0;
    double east_mm = 0.0;
    double up_mm = 0.0;
};

struct GpsRecordFile {
    std::string station_id;
    std::vector<GpsRow> rows;
    /// Missing days between consecutive rows, as (row index, days skipped).
    std::vector<std::pair<std::size_t, int>> gaps;
};

/// Whitespace- or comma-delimited, six numeric columns per row. Blank lines
/// and lines starting with '#' are skipped; a "# station: ID" comment sets
/// the station id.
GpsRecordFile parse_gps(std::string_view text, std::string station_id = {});

/// Fixed-precision text form that parse_gps reads back unchanged.
std::string format_gps(const GpsRecordFile& file);

/// A series ready for detection plus the time stamp of every sample.
struct Observations {
    TimeSeries series;
    std::vector<double> times;
    std::string format; // "csv" or "gps"
    std::string station_id;
    std::size_t gap_count = 0;
};

/// Two numeric columns (optionally under a header) are read as t,value;
/// six columns as GPS records, from which `component` is taken.
Observations parse_observations(std::string_view text, Component component,
                                std::string station_id = {});

Observations read_observations(const std::filesystem::path& path, Component component);

std::string read_file(const std::filesystem::path& path);

} // namespace ssaid::tools
