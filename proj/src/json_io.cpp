#include "roomrec/json_io.hpp"

#include <fstream>

#include "roomrec/errors.hpp"

namespace roomrec {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  return doc;
}

void save_json_file(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << doc.dump(2) << '\n';
}

void check_schema(const nlohmann::json& doc, const std::string& what) {
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    throw ParseError(what + ": missing integer schema_version");
  }
  const int major = doc["schema_version"].get<int>();
  if (major != kSchemaMajor) {
    throw ParseError(what + ": unsupported schema_version " + std::to_string(major) +
                     " (expected " + std::to_string(kSchemaMajor) + ")");
  }
}

}  // namespace roomrec
