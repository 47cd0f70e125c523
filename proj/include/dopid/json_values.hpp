#pragma once

#include "dopid/registry.hpp"
#include "dopid/value.hpp"

#include <json.hpp>

namespace dopid {

using Json = nlohmann::json;

// Document error carrying a JSON-pointer-like path ("arcs[2].inscription").
class DocumentError : public std::runtime_error {
 public:
  DocumentError(const std::string& path, const std::string& msg)
      : std::runtime_error(path.empty() ? msg : path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Typed decoding: ints may be numbers or decimal strings, rats "p/q" strings,
// numbers or {"rat": "p/q"}; lists are arrays.
Value value_from_json(const Json& j, const Type& t, const TypeRegistry& reg, const std::string& path);

// Untyped decoding for log attributes: integer -> int, string -> string,
// bool -> bool, {"rat": "p/q"} -> rat.
Value infer_value(const Json& j, const std::string& path);

Json value_to_json(const Value& v);

Json parse_json_text(const std::string& text, const std::string& what);
std::string read_file(const std::string& path);

}  // namespace dopid
