#pragma once

#include "dopid/registry.hpp"
#include "dopid/value.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dopid {

// Core guard grammar. Derived operators (||, <, <=, numeric ==, !=, binary -)
// are desugared by the parser, so only these node kinds exist.
enum class ExprKind {
  BoolLit,
  IntLit,
  RatLit,
  StrLit,  // string or finset literal; the node type tells which
  Var,
  Eq,      // d = d over non-arithmetic scalars
  Ge,      // k >= k
  Gt,      // k > k
  And,
  Not,
  Add,
  Neg,
  Apply,   // f(...); component-wise when one argument is a list
  Agg,     // sum / min / max / mean over a list term
};

enum class AggOp { Sum, Min, Max, Mean };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  Type type;
  std::string name;        // variable / function name
  Value literal;           // literals
  AggOp agg = AggOp::Sum;  // Agg
  std::vector<ExprPtr> args;
};

bool structurally_equal(const Expr& a, const Expr& b);

class ParseError : public std::runtime_error {
 public:
  ParseError(size_t pos, const std::string& msg)
      : std::runtime_error("at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  size_t position() const { return pos_; }

 private:
  size_t pos_;
};

using TypeEnv = std::map<std::string, Type>;

/// Parses and typechecks a guard. The root must be boolean.
ExprPtr parse_constraint(const std::string& text, const TypeEnv& env, const TypeRegistry& registry);

/// Fully parenthesized concrete syntax; parse(print(e)) rebuilds e.
std::string print(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

// Node builders with type checking; used by the parser and by test generators.
namespace build {
ExprPtr bool_lit(bool b);
ExprPtr int_lit(Integer v);
ExprPtr rat_lit(Rational v);
ExprPtr str_lit(std::string text, Type type);
ExprPtr var(std::string name, Type type);
ExprPtr eq(ExprPtr a, ExprPtr b);
ExprPtr ge(ExprPtr a, ExprPtr b);
ExprPtr gt(ExprPtr a, ExprPtr b);
ExprPtr conj(ExprPtr a, ExprPtr b);
ExprPtr neg_c(ExprPtr a);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr minus(ExprPtr a);
ExprPtr apply(const FunctionSig& sig, std::vector<ExprPtr> args);
ExprPtr aggregate(AggOp op, ExprPtr list);
}  // namespace build

const char* agg_name(AggOp op);

}  // namespace dopid
