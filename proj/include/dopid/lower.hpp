#pragma once

#include "dopid/expr.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace dopid {

// Strings and finset elements become Int codes over a finite symbol universe;
// object ids become Int codes 1..|O| (0 marks an unused slot).
class ValueCoder {
 public:
  ValueCoder() = default;
  ValueCoder(const std::set<std::string>& symbols, const std::vector<std::string>& objects);

  bool has_symbol(const std::string& s) const { return symbols_.count(s) > 0; }
  bool has_object(const std::string& id) const { return objects_.count(id) > 0; }
  int symbol_code(const std::string& s) const;
  int object_code(const std::string& id) const;
  const std::string& symbol_at(int code) const { return symbol_names_.at(code - 1); }
  const std::string& object_at(int code) const { return object_names_.at(code - 1); }
  int symbol_count() const { return static_cast<int>(symbol_names_.size()); }
  int object_count() const { return static_cast<int>(object_names_.size()); }

  // SMT literal for a scalar value; throws if a symbol is outside the universe.
  std::string literal(const Value& v) const;
  bool representable(const Value& v) const;

 private:
  std::map<std::string, int> symbols_;
  std::vector<std::string> symbol_names_;
  std::map<std::string, int> objects_;
  std::vector<std::string> object_names_;
};

const char* smt_sort(const Type& t);
std::string smt_int(const Integer& i);
std::string smt_rat(const Rational& r);
std::string smt_function_name(const std::string& name);

// Solver terms for the free variables of a guard. A list variable is a
// vector of Int slots; a slot is present iff its value is nonzero.
struct VarMap {
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;
};

// Term whose models agree with evaluate(): definedness of every sub-term
// (nonempty min/max/mean, table coverage) is conjoined at the root.
std::string lower_to_smt(const Expr& e, const VarMap& vars, const ValueCoder& coder, const TypeRegistry& reg);

// declare-fun lines and per-point table equalities for every function of reg.
std::vector<std::string> function_declarations(const TypeRegistry& reg, const ValueCoder& coder);

}  // namespace dopid
