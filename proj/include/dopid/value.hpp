#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dopid {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class BaseKind { Bool, Int, Rat, String, FinSet, Object };

// A base type from Σ_obj ∪ Σ_val, optionally lifted to a list type [σ].
struct Type {
  BaseKind kind = BaseKind::Bool;
  std::string name;  // finset / object type name; empty for builtins
  bool list = false;

  static Type boolean() { return {BaseKind::Bool, "", false}; }
  static Type integer() { return {BaseKind::Int, "", false}; }
  static Type rational() { return {BaseKind::Rat, "", false}; }
  static Type string() { return {BaseKind::String, "", false}; }
  static Type finset(std::string n) { return {BaseKind::FinSet, std::move(n), false}; }
  static Type object(std::string n) { return {BaseKind::Object, std::move(n), false}; }

  Type element() const { return {kind, name, false}; }
  Type as_list() const { return {kind, name, true}; }

  bool is_arithmetic() const { return !list && (kind == BaseKind::Int || kind == BaseKind::Rat); }
  bool is_object() const { return kind == BaseKind::Object; }
  bool is_data() const { return kind != BaseKind::Object; }

  std::string str() const;

  friend bool operator==(const Type&, const Type&) = default;
  friend auto operator<=>(const Type&, const Type&) = default;
};

struct StrVal {
  std::string text;
  friend bool operator==(const StrVal&, const StrVal&) = default;
  friend auto operator<=>(const StrVal&, const StrVal&) = default;
};

struct FinSetVal {
  std::string domain;
  std::string elem;
  friend bool operator==(const FinSetVal&, const FinSetVal&) = default;
  friend auto operator<=>(const FinSetVal&, const FinSetVal&) = default;
};

struct ObjRef {
  std::string id;
  std::string type;
  friend bool operator==(const ObjRef&, const ObjRef&) = default;
  friend auto operator<=>(const ObjRef&, const ObjRef&) = default;
};

class Value;

struct ListVal {
  Type elem;
  std::vector<Value> items;
};

/// Tagged data value: Bool, Int, Rat, Str, FinSetElem, ObjId or a uniform list.
/// Rationals are kept normalized by cpp_rational; no floating point anywhere.
class Value {
 public:
  using Storage = std::variant<bool, Integer, Rational, StrVal, FinSetVal, ObjRef, ListVal>;

  Value() : v_(false) {}
  static Value boolean(bool b) { return Value(Storage(b)); }
  static Value integer(Integer i) { return Value(Storage(std::move(i))); }
  static Value rational(Rational r) { return Value(Storage(std::move(r))); }
  static Value string(std::string s) { return Value(Storage(StrVal{std::move(s)})); }
  static Value finset(std::string domain, std::string e) {
    return Value(Storage(FinSetVal{std::move(domain), std::move(e)}));
  }
  static Value object(std::string id, std::string type) {
    return Value(Storage(ObjRef{std::move(id), std::move(type)}));
  }
  static Value list(Type elem, std::vector<Value> items);

  Type type() const;

  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<Integer>(v_); }
  bool is_rat() const { return std::holds_alternative<Rational>(v_); }
  bool is_str() const { return std::holds_alternative<StrVal>(v_); }
  bool is_finset() const { return std::holds_alternative<FinSetVal>(v_); }
  bool is_object() const { return std::holds_alternative<ObjRef>(v_); }
  bool is_list() const { return std::holds_alternative<ListVal>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  const Integer& as_int() const { return std::get<Integer>(v_); }
  const Rational& as_rat() const { return std::get<Rational>(v_); }
  const std::string& as_str() const { return std::get<StrVal>(v_).text; }
  const FinSetVal& as_finset() const { return std::get<FinSetVal>(v_); }
  const ObjRef& as_object() const { return std::get<ObjRef>(v_); }
  const ListVal& as_list() const { return std::get<ListVal>(v_); }

  // Numeric view: Int promoted to Rat.
  Rational numeric() const;
  bool is_numeric() const { return is_int() || is_rat(); }

  // Text for strings / finset elements, id for objects.
  const std::string& symbol() const;

  const Storage& storage() const { return v_; }

  std::string str() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  explicit Value(Storage s) : v_(std::move(s)) {}
  Storage v_;
};

// Loose equality used when comparing log attributes with model data values:
// Int/Rat compare numerically, strings and finset elements by text.
bool values_match(const Value& a, const Value& b);

Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& r);

using Token = std::vector<Value>;
std::string token_str(const Token& t);

}  // namespace dopid
