#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace frontlab::config {

/// Parse the structured-text config format (key = value lines grouped under
/// [table] / [table.sub] headers; strings, numbers, booleans and flat
/// arrays) into a JSON object tree. Files whose first significant character
/// is '{' are parsed as JSON directly, an accepted alternative serialization
/// of the same schema. Keys are annotated with source line numbers in a
/// parallel "__lines" map used for diagnostics.
nlohmann::json parse_config_text(const std::string& text);

nlohmann::json load_config_file(const std::filesystem::path& path);

/// Reject unknown keys against a schema skeleton: every leaf path in the
/// config must exist in the schema. Throws config_error naming the key (and
/// line when available).
void validate_keys(const nlohmann::json& config, const nlohmann::json& schema);

/// Schema skeleton for run configs (CLI reference documentation mirrors it).
nlohmann::json run_config_schema();

/// FNV-1a hash of the canonical dump, for run records.
std::string config_hash(const nlohmann::json& config);

}  // namespace frontlab::config
