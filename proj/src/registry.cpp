#include "dopid/registry.hpp"

#include <stdexcept>

namespace dopid {

bool is_builtin_type_name(const std::string& name) {
  return name == "bool" || name == "int" || name == "rat" || name == "string";
}

void TypeRegistry::add_object_type(const std::string& name) {
  if (is_builtin_type_name(name) || finsets_.count(name) || object_types_.count(name))
    throw std::invalid_argument("duplicate type name '" + name + "'");
  object_types_.insert(name);
}

void TypeRegistry::add_finset(const std::string& name, std::vector<std::string> domain) {
  if (is_builtin_type_name(name) || finsets_.count(name) || object_types_.count(name))
    throw std::invalid_argument("duplicate type name '" + name + "'");
  if (domain.empty()) throw std::invalid_argument("finset '" + name + "' has an empty domain");
  finsets_.emplace(name, std::move(domain));
}

void TypeRegistry::add_function(FunctionSig sig) {
  if (functions_.count(sig.name)) throw std::invalid_argument("duplicate function '" + sig.name + "'");
  if (sig.result.list) throw std::invalid_argument("function '" + sig.name + "' cannot return a list");
  for (const auto& a : sig.args)
    if (a.list) throw std::invalid_argument("function '" + sig.name + "' cannot take list arguments");
  functions_.emplace(sig.name, std::move(sig));
}

const std::vector<std::string>& TypeRegistry::finset_domain(const std::string& name) const {
  auto it = finsets_.find(name);
  if (it == finsets_.end()) throw std::invalid_argument("unknown finset '" + name + "'");
  return it->second;
}

std::optional<Type> TypeRegistry::try_resolve(const std::string& text) const {
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    auto inner = try_resolve(text.substr(1, text.size() - 2));
    if (!inner || inner->list) return std::nullopt;
    return inner->as_list();
  }
  if (text == "bool") return Type::boolean();
  if (text == "int") return Type::integer();
  if (text == "rat") return Type::rational();
  if (text == "string") return Type::string();
  if (finsets_.count(text)) return Type::finset(text);
  if (object_types_.count(text)) return Type::object(text);
  return std::nullopt;
}

Type TypeRegistry::resolve(const std::string& text) const {
  if (auto t = try_resolve(text)) return *t;
  throw std::invalid_argument("unknown type '" + text + "'");
}

const FunctionSig* TypeRegistry::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

}  // namespace dopid
