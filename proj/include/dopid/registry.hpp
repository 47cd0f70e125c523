#pragma once

#include "dopid/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dopid {

struct FunctionSig {
  std::string name;
  std::vector<Type> args;
  Type result;
  // Finite interpretation; a function with a table is interpreted (lookups
  // outside the table fail), one without is genuinely uninterpreted.
  std::optional<std::map<std::vector<Value>, Value>> table;
};

/// Σ_obj, Σ_val and the function symbols available to guards.
class TypeRegistry {
 public:
  void add_object_type(const std::string& name);
  void add_finset(const std::string& name, std::vector<std::string> domain);
  void add_function(FunctionSig sig);

  bool is_object_type(const std::string& name) const { return object_types_.count(name) > 0; }
  bool is_finset(const std::string& name) const { return finsets_.count(name) > 0; }
  const std::vector<std::string>& finset_domain(const std::string& name) const;

  // Resolves "int", "order", "[product]", ... ; throws std::invalid_argument.
  Type resolve(const std::string& text) const;
  std::optional<Type> try_resolve(const std::string& text) const;

  const FunctionSig* function(const std::string& name) const;

  const std::set<std::string>& object_types() const { return object_types_; }
  const std::map<std::string, std::vector<std::string>>& finsets() const { return finsets_; }
  const std::map<std::string, FunctionSig>& functions() const { return functions_; }

 private:
  std::set<std::string> object_types_;
  std::map<std::string, std::vector<std::string>> finsets_;
  std::map<std::string, FunctionSig> functions_;
};

bool is_builtin_type_name(const std::string& name);

}  // namespace dopid
