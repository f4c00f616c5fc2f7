#pragma once

// JSON forms of the library configurations. Readers are strict: unknown keys
// and wrong types are input errors, missing keys keep their defaults.

#include <ssaid/experiment.hpp>

#include <json.hpp>

namespace ssaid::tools {

using Json = nlohmann::ordered_json;

Json to_json(const id::IdConfig& c);
Json to_json(const SsaidConfig& c);
Json to_json(const sim::SseSignalSpec& s);
Json to_json(const sim::FamilySpec& s);
Json to_json(const bench::SignalSpec& s);
Json to_json(const baseline::AicConfig& c);
Json to_json(const bench::ExperimentConfig& c);

void from_json(const Json& j, id::IdConfig& c);
void from_json(const Json& j, SsaidConfig& c);
void from_json(const Json& j, sim::SseSignalSpec& s);
void from_json(const Json& j, sim::FamilySpec& s);
void from_json(const Json& j, bench::SignalSpec& s);
void from_json(const Json& j, baseline::AicConfig& c);
void from_json(const Json& j, bench::ExperimentConfig& c);

std::string to_string(bench::Detector d);
bench::Detector parse_detector(std::string_view name);

/// Recursive merge: objects merge key by key, anything else replaces.
void merge_into(Json& base, const Json& overlay);

} // namespace ssaid::tools
