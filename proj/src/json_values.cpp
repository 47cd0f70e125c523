#include "dopid/json_values.hpp"

#include <fstream>
#include <sstream>

namespace dopid {

namespace {

Rational rational_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(Integer(j.dump()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_object() && j.size() == 1 && j.contains("rat") && j["rat"].is_string())
      return parse_rational(j["rat"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DocumentError(path, e.what());
  }
  throw DocumentError(path, "expected a rational (\"p/q\", integer or {\"rat\": ...}), got " + j.dump());
}

}  // namespace

Value value_from_json(const Json& j, const Type& t, const TypeRegistry& reg, const std::string& path) {
  if (t.list) {
    if (!j.is_array()) throw DocumentError(path, "expected a list of " + t.element().str());
    std::vector<Value> items;
    for (size_t i = 0; i < j.size(); ++i)
      items.push_back(value_from_json(j[i], t.element(), reg, path + "[" + std::to_string(i) + "]"));
    try {
      return Value::list(t.element(), std::move(items));
    } catch (const std::invalid_argument& e) {
      throw DocumentError(path, e.what());
    }
  }
  switch (t.kind) {
    case BaseKind::Bool:
      if (!j.is_boolean()) throw DocumentError(path, "expected a bool, got " + j.dump());
      return Value::boolean(j.get<bool>());
    case BaseKind::Int:
      if (j.is_number_integer()) return Value::integer(Integer(j.dump()));
      if (j.is_string()) {
        try {
          return Value::integer(Integer(j.get<std::string>()));
        } catch (const std::exception&) {
        }
      }
      throw DocumentError(path, "expected an int, got " + j.dump());
    case BaseKind::Rat: return Value::rational(rational_from_json(j, path));
    case BaseKind::String:
      if (!j.is_string()) throw DocumentError(path, "expected a string, got " + j.dump());
      return Value::string(j.get<std::string>());
    case BaseKind::FinSet: {
      if (!j.is_string()) throw DocumentError(path, "expected an element of " + t.name + ", got " + j.dump());
      auto s = j.get<std::string>();
      const auto& dom = reg.finset_domain(t.name);
      if (std::find(dom.begin(), dom.end(), s) == dom.end())
        throw DocumentError(path, "'" + s + "' is not in the domain of " + t.name);
      return Value::finset(t.name, s);
    }
    case BaseKind::Object:
      if (!j.is_string()) throw DocumentError(path, "expected an object id of type " + t.name + ", got " + j.dump());
      return Value::object(j.get<std::string>(), t.name);
  }
  throw DocumentError(path, "unsupported type");
}

Value infer_value(const Json& j, const std::string& path) {
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(Integer(j.dump()));
  if (j.is_string()) return Value::string(j.get<std::string>());
  if (j.is_object()) return Value::rational(rational_from_json(j, path));
  throw DocumentError(path, "cannot infer a value type for " + j.dump() + " (floats are not accepted; use {\"rat\": \"p/q\"})");
}

Json value_to_json(const Value& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) {
    const auto& i = v.as_int();
    if (i >= std::numeric_limits<long long>::min() && i <= std::numeric_limits<long long>::max())
      return static_cast<long long>(i);
    return i.str();
  }
  if (v.is_rat()) return Json{{"rat", rational_str(v.as_rat())}};
  if (v.is_list()) {
    Json arr = Json::array();
    for (const auto& x : v.as_list().items) arr.push_back(value_to_json(x));
    return arr;
  }
  return v.symbol();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DocumentError("", what + " is not valid JSON: " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dopid
