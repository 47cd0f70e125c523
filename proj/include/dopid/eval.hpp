#pragma once

#include "dopid/expr.hpp"

#include <functional>
#include <map>
#include <optional>

namespace dopid {

using Binding = std::map<std::string, Value>;

// Raised for undefined sub-terms: empty min/max/mean, missing table entries,
// uninterpreted symbols. Guards treat it as "not satisfied".
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation is strict: every sub-term is evaluated, so an undefined
// sub-term anywhere makes the whole constraint undefined.
Value evaluate_term(const Expr& e, const Binding& b, const TypeRegistry& reg);
bool evaluate(const Expr& e, const Binding& b, const TypeRegistry& reg);

Value aggregate(AggOp op, const std::vector<Value>& values);

// True iff some sub-term applies a function without an interpretation table.
bool uses_uninterpreted(const Expr& e, const TypeRegistry& reg);

}  // namespace dopid
