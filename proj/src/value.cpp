#include "dopid/value.hpp"

#include <algorithm>

namespace dopid {

std::string Type::str() const {
  std::string base;
  switch (kind) {
    case BaseKind::Bool: base = "bool"; break;
    case BaseKind::Int: base = "int"; break;
    case BaseKind::Rat: base = "rat"; break;
    case BaseKind::String: base = "string"; break;
    case BaseKind::FinSet:
    case BaseKind::Object: base = name; break;
  }
  return list ? "[" + base + "]" : base;
}

Value Value::list(Type elem, std::vector<Value> items) {
  elem.list = false;
  for (const auto& v : items) {
    if (v.type() != elem)
      throw std::invalid_argument("list element " + v.str() + " is not of type " + elem.str());
  }
  return Value(Storage(ListVal{std::move(elem), std::move(items)}));
}

Type Value::type() const {
  return std::visit(
      [](const auto& x) -> Type {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) return Type::boolean();
        else if constexpr (std::is_same_v<T, Integer>) return Type::integer();
        else if constexpr (std::is_same_v<T, Rational>) return Type::rational();
        else if constexpr (std::is_same_v<T, StrVal>) return Type::string();
        else if constexpr (std::is_same_v<T, FinSetVal>) return Type::finset(x.domain);
        else if constexpr (std::is_same_v<T, ObjRef>) return Type::object(x.type);
        else return x.elem.as_list();
      },
      v_);
}

Rational Value::numeric() const {
  if (is_int()) return Rational(as_int());
  if (is_rat()) return as_rat();
  throw std::logic_error("value " + str() + " is not numeric");
}

const std::string& Value::symbol() const {
  if (is_str()) return as_str();
  if (is_finset()) return as_finset().elem;
  if (is_object()) return as_object().id;
  throw std::logic_error("value " + str() + " has no symbol");
}

std::string rational_str(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      auto dot = text.find('.');
      if (dot == std::string::npos) return Rational(Integer(text));
      // exact decimal
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      Integer scale = 1;
      for (size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
      return Rational(Integer(digits), scale);
    }
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

std::string Value::str() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, Integer>) return x.str();
        else if constexpr (std::is_same_v<T, Rational>) return rational_str(x);
        else if constexpr (std::is_same_v<T, StrVal>) return "\"" + x.text + "\"";
        else if constexpr (std::is_same_v<T, FinSetVal>) return x.elem;
        else if constexpr (std::is_same_v<T, ObjRef>) return x.id;
        else {
          std::string out = "[";
          for (size_t i = 0; i < x.items.size(); ++i) {
            if (i) out += ",";
            out += x.items[i].str();
          }
          return out + "]";
        }
      },
      v_);
}

bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
  return std::visit(
      [&b](const auto& x) -> std::strong_ordering {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v_);
        if constexpr (std::is_same_v<T, Integer> || std::is_same_v<T, Rational>) {
          if (x < y) return std::strong_ordering::less;
          if (y < x) return std::strong_ordering::greater;
          return std::strong_ordering::equal;
        } else if constexpr (std::is_same_v<T, ListVal>) {
          if (auto c = x.elem <=> y.elem; c != 0) return c;
          return std::lexicographical_compare_three_way(x.items.begin(), x.items.end(), y.items.begin(),
                                                        y.items.end());
        } else {
          return x <=> y;
        }
      },
      a.v_);
}

bool values_match(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) return a.numeric() == b.numeric();
  if ((a.is_str() || a.is_finset()) && (b.is_str() || b.is_finset())) return a.symbol() == b.symbol();
  return a == b;
}

std::string token_str(const Token& t) {
  std::string out = "<";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += t[i].str();
  }
  return out + ">";
}

}  // namespace dopid
