#pragma once

#include "dopid/value.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dopid {

class SExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SExpr {
  bool is_atom = true;
  std::string atom;  // symbols, numerals, decimals and "strings" (quotes kept)
  std::vector<SExpr> items;

  static SExpr make_atom(std::string a) { return {true, std::move(a), {}}; }
  static SExpr make_list(std::vector<SExpr> xs) { return {false, {}, std::move(xs)}; }

  bool is(const std::string& a) const { return is_atom && atom == a; }
  std::string str() const;
};

// All top-level expressions in text.
std::vector<SExpr> parse_sexprs(const std::string& text);
SExpr parse_sexpr(const std::string& text);

// Length of the first complete top-level expression in text, after leading
// whitespace and comments; 0 when text does not yet hold one. An atom counts
// as complete once it is followed by a delimiter.
size_t complete_prefix(const std::string& text);

// Solver value terms: numerals, decimals, (- x), (/ a b), true/false.
Integer sexpr_integer(const SExpr& e);
Rational sexpr_rational(const SExpr& e);
bool sexpr_bool(const SExpr& e);

}  // namespace dopid
