#pragma once

#include <string>

#include <json.hpp>

namespace roomrec {

// Current major version written into every file this project emits.
inline constexpr int kSchemaMajor = 1;

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& doc, const std::string& path);

// Rejects documents whose schema_version has an unknown major.
void check_schema(const nlohmann::json& doc, const std::string& what);

}  // namespace roomrec
