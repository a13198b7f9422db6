#pragma once

// Report serialization. The body (CSV or JSON) is a pure function of the
// resolved config and the results; wall-clock and thread count live only in
// the manifest written next to it.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "brw/experiments.hpp"

namespace brw {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

std::string to_csv(const ExperimentReport& report);
nlohmann::json to_json(const ExperimentReport& report);
/// Canonical config echo (no output path, no thread count).
nlohmann::json config_json(const RunConfig& cfg);
std::string render(const ExperimentReport& report, std::string_view format);

/// Hex SHA-1 of "blob <size>\0" + content, as git hashes a file.
std::string git_blob_sha1(std::string_view content);

/// Writes `body` to path; throws std::runtime_error if the file cannot be written.
void write_text(const std::string& path, std::string_view body);

nlohmann::json make_manifest(const RunConfig& cfg, const std::string& report_path, std::string_view body,
                             double wall_seconds, int threads);

/// Schema problems of a JSON report; empty when valid.
std::vector<std::string> validate_report_json(const nlohmann::json& j);

}  // namespace brw
