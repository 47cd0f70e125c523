#include "dopid/net.hpp"

#include <stdexcept>

namespace dopid {

const char* var_kind_name(VarKind k) {
  switch (k) {
    case VarKind::Normal: return "normal";
    case VarKind::List: return "list";
    case VarKind::ListSubset: return "subset";
    case VarKind::ListExact: return "exact";
    case VarKind::Nu: return "nu";
  }
  return "?";
}

VarKind parse_var_kind(const std::string& s) {
  if (s == "normal") return VarKind::Normal;
  if (s == "list") return VarKind::List;
  if (s == "subset") return VarKind::ListSubset;
  if (s == "exact") return VarKind::ListExact;
  if (s == "nu") return VarKind::Nu;
  throw std::invalid_argument("unknown variable kind '" + s + "'");
}

bool is_list_kind(VarKind k) { return k == VarKind::List || k == VarKind::ListSubset || k == VarKind::ListExact; }

const char* template_class_name(TemplateClass c) {
  switch (c) {
    case TemplateClass::Simple: return "simple";
    case TemplateClass::Transfer: return "transfer";
    case TemplateClass::SubsetTemplate: return "subset-template";
    case TemplateClass::ExactTemplate: return "exact-template";
  }
  return "?";
}

int Inscription::list_position() const {
  for (size_t i = 0; i < entries.size(); ++i)
    if (is_list_kind(entries[i].kind)) return static_cast<int>(i);
  return -1;
}

TemplateClass Inscription::template_class() const {
  int pos = -1;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (!is_list_kind(entries[i].kind)) continue;
    if (pos >= 0) throw std::invalid_argument("inscription " + str() + " has more than one list variable");
    pos = static_cast<int>(i);
  }
  if (pos < 0) return TemplateClass::Simple;
  switch (entries[pos].kind) {
    case VarKind::ListSubset: return TemplateClass::SubsetTemplate;
    case VarKind::ListExact: return TemplateClass::ExactTemplate;
    default: return TemplateClass::Transfer;
  }
}

std::string Inscription::str() const {
  std::string out = "<";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ",";
    out += entries[i].name;
    if (entries[i].kind == VarKind::ListSubset) out += "^sub";
    if (entries[i].kind == VarKind::ListExact) out += "^=";
    if (entries[i].kind == VarKind::Nu) out += "^nu";
  }
  return out + ">";
}

std::optional<size_t> Net::find_place(const std::string& name) const {
  for (size_t i = 0; i < places.size(); ++i)
    if (places[i].name == name) return i;
  return std::nullopt;
}

std::optional<size_t> Net::find_transition(const std::string& name) const {
  for (size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].name == name) return i;
  return std::nullopt;
}

size_t Net::place_index(const std::string& name) const {
  if (auto p = find_place(name)) return *p;
  throw std::invalid_argument("unknown place '" + name + "'");
}

size_t Net::transition_index(const std::string& name) const {
  if (auto t = find_transition(name)) return *t;
  throw std::invalid_argument("unknown transition '" + name + "'");
}

std::set<size_t> Net::preset(size_t t) const {
  std::set<size_t> out;
  for (const auto& f : inputs.at(t)) out.insert(f.place);
  return out;
}

std::set<size_t> Net::postset(size_t t) const {
  std::set<size_t> out;
  for (const auto& f : outputs.at(t)) out.insert(f.place);
  return out;
}

std::set<std::string> Net::preset(const std::string& t) const {
  std::set<std::string> out;
  for (size_t p : preset(transition_index(t))) out.insert(places[p].name);
  return out;
}

std::set<std::string> Net::postset(const std::string& t) const {
  std::set<std::string> out;
  for (size_t p : postset(transition_index(t))) out.insert(places[p].name);
  return out;
}

const Inscription* Net::in_flow(size_t p, size_t t) const {
  for (const auto& f : inputs.at(t))
    if (f.place == p) return &f.insc;
  return nullptr;
}

const Inscription* Net::out_flow(size_t t, size_t p) const {
  for (const auto& f : outputs.at(t))
    if (f.place == p) return &f.insc;
  return nullptr;
}

std::set<std::string> Net::invars(size_t t) const {
  std::set<std::string> out;
  for (const auto& f : inputs.at(t))
    for (const auto& v : f.insc.entries) out.insert(v.name);
  return out;
}

std::set<std::string> Net::outvars(size_t t) const {
  std::set<std::string> out;
  for (const auto& f : outputs.at(t))
    for (const auto& v : f.insc.entries) out.insert(v.name);
  return out;
}

std::set<std::string> Net::vars(size_t t) const {
  auto out = invars(t);
  auto o = outvars(t);
  out.insert(o.begin(), o.end());
  return out;
}

std::vector<std::string> Net::data_vars(size_t t) const {
  std::vector<std::string> out;
  for (const auto& v : vars(t))
    if (var_type(v).is_data()) out.push_back(v);
  return out;
}

bool Net::has_nu(size_t t) const {
  for (const auto& f : outputs.at(t))
    for (const auto& v : f.insc.entries)
      if (v.kind == VarKind::Nu) return true;
  return false;
}

bool Net::any_nu() const {
  for (size_t t = 0; t < transitions.size(); ++t)
    if (has_nu(t)) return true;
  return false;
}

const Type& Net::var_type(const std::string& name) const {
  auto it = variables.find(name);
  if (it == variables.end()) throw std::invalid_argument("undeclared variable '" + name + "'");
  return it->second;
}

}  // namespace dopid
