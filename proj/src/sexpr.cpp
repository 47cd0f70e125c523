#include "dopid/sexpr.hpp"

#include <algorithm>
#include <cctype>

namespace dopid {

namespace {

bool delimiter(char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';'; }

size_t skip_blank(const std::string& s, size_t i) {
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s[i] == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else {
      break;
    }
  }
  return i;
}

// End of the expression starting at i, or npos if incomplete.
size_t scan(const std::string& s, size_t i, bool at_eof) {
  if (s[i] == ')') throw SExprError("unexpected ')' at offset " + std::to_string(i));
  if (s[i] == '(') {
    size_t depth = 0;
    while (i < s.size()) {
      char c = s[i];
      if (c == '"') {
        ++i;
        while (i < s.size()) {
          if (s[i] == '"') {
            if (i + 1 < s.size() && s[i + 1] == '"') {
              i += 2;
              continue;
            }
            break;
          }
          ++i;
        }
        if (i >= s.size()) return std::string::npos;
      } else if (c == '|') {
        ++i;
        while (i < s.size() && s[i] != '|') ++i;
        if (i >= s.size()) return std::string::npos;
      } else if (c == ';') {
        while (i < s.size() && s[i] != '\n') ++i;
        continue;
      } else if (c == '(') {
        ++depth;
      } else if (c == ')') {
        if (--depth == 0) return i + 1;
      }
      ++i;
    }
    return std::string::npos;
  }
  if (s[i] == '"') {
    ++i;
    while (i < s.size()) {
      if (s[i] == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          i += 2;
          continue;
        }
        return i + 1;
      }
      ++i;
    }
    return std::string::npos;
  }
  while (i < s.size() && !delimiter(s[i])) ++i;
  if (i == s.size() && !at_eof) return std::string::npos;
  return i;
}

struct Parser {
  const std::string& s;
  size_t i = 0;

  SExpr parse() {
    i = skip_blank(s, i);
    if (i >= s.size()) throw SExprError("unexpected end of input");
    char c = s[i];
    if (c == '(') {
      ++i;
      std::vector<SExpr> xs;
      while (true) {
        i = skip_blank(s, i);
        if (i >= s.size()) throw SExprError("unbalanced '('");
        if (s[i] == ')') {
          ++i;
          return SExpr::make_list(std::move(xs));
        }
        xs.push_back(parse());
      }
    }
    if (c == ')') throw SExprError("unexpected ')' at offset " + std::to_string(i));
    size_t end = scan(s, i, true);
    if (end == std::string::npos) throw SExprError("unterminated literal");
    if (c == '|') {
      end = s.find('|', i + 1);
      if (end == std::string::npos) throw SExprError("unterminated quoted symbol");
      ++end;
    }
    SExpr a = SExpr::make_atom(s.substr(i, end - i));
    i = end;
    return a;
  }
};

}  // namespace

std::string SExpr::str() const {
  if (is_atom) return atom;
  std::string out = "(";
  for (size_t k = 0; k < items.size(); ++k) {
    if (k) out += ' ';
    out += items[k].str();
  }
  return out + ")";
}

std::vector<SExpr> parse_sexprs(const std::string& text) {
  Parser p{text};
  std::vector<SExpr> out;
  while (true) {
    p.i = skip_blank(text, p.i);
    if (p.i >= text.size()) return out;
    out.push_back(p.parse());
  }
}

SExpr parse_sexpr(const std::string& text) {
  auto xs = parse_sexprs(text);
  if (xs.size() != 1) throw SExprError("expected one expression, found " + std::to_string(xs.size()));
  return xs[0];
}

size_t complete_prefix(const std::string& text) {
  size_t i = skip_blank(text, 0);
  if (i >= text.size()) return 0;
  size_t end = scan(text, i, false);
  return end == std::string::npos ? 0 : end;
}

Integer sexpr_integer(const SExpr& e) {
  if (e.is_atom) {
    if (e.atom.empty() || !std::all_of(e.atom.begin(), e.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw SExprError("not an integer: " + e.atom);
    return Integer(e.atom);
  }
  if (e.items.size() == 2 && e.items[0].is("-")) return -sexpr_integer(e.items[1]);
  throw SExprError("not an integer: " + e.str());
}

Rational sexpr_rational(const SExpr& e) {
  if (e.is_atom) {
    auto dot = e.atom.find('.');
    if (dot == std::string::npos) return Rational(sexpr_integer(e));
    return parse_rational(e.atom);
  }
  if (e.items.size() == 2 && e.items[0].is("-")) return -sexpr_rational(e.items[1]);
  if (e.items.size() == 3 && e.items[0].is("/")) {
    Rational d = sexpr_rational(e.items[2]);
    if (d == 0) throw SExprError("division by zero in value " + e.str());
    return sexpr_rational(e.items[1]) / d;
  }
  if (e.items.size() == 2 && e.items[0].is("to_real")) return sexpr_rational(e.items[1]);
  throw SExprError("not a rational: " + e.str());
}

bool sexpr_bool(const SExpr& e) {
  if (e.is("true")) return true;
  if (e.is("false")) return false;
  throw SExprError("not a boolean: " + e.str());
}

}  // namespace dopid
