#pragma once

// Command implementations shared by the ssaid executable and the tests. Each
// command is driven by one fully resolved settings object; the same object
// is echoed into the run manifest, which is what makes replay exact.

#include <ssaid_tools/settings.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ssaid::tools {

/// Commands that take a settings object.
const std::vector<std::string>& command_names();

/// Complete default settings for a command. `preset` is "desk" or "paper".
Json default_settings(std::string_view command, std::string_view preset = "paper");

struct RunInfo {
    std::filesystem::path out_dir;
    /// Recorded in the manifest. Replays reuse the original value.
    std::string timestamp;
};

/// Validates `settings` and writes every output of the command, manifest
/// included, into `info.out_dir`.
void run_command(const Json& settings, const RunInfo& info);

/// Re-runs the command recorded in a manifest into `out_dir`.
void replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir);

/// SOURCE_DATE_EPOCH when set, otherwise the current time; ISO 8601 UTC.
std::string current_timestamp();

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Shortest round-trip decimal form.
std::string format_number(double v);

} // namespace ssaid::tools
