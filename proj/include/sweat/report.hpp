#ifndef SWEAT_REPORT_HPP
#define SWEAT_REPORT_HPP

#include <filesystem>

#include <json.hpp>

#include "sweat/alignment.hpp"
#include "sweat/association.hpp"
#include "sweat/lexicon.hpp"

namespace sweat {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "0.1.0";

nlohmann::json to_json(const TestStatistics& stats);
nlohmann::json to_json(const SweatResult& result);
nlohmann::json to_json(const WeatResult& result);
nlohmann::json to_json(const AlignmentReport& report, bool include_rotation = false);
nlohmann::json to_json(const RefinementReport& report);

/// Reads back the statistics block of a saved report.
SweatResult sweat_result_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

/// Copy of `report` without its `meta` object, for determinism checks.
nlohmann::json strip_meta(nlohmann::json report);

} // namespace sweat

#endif
