#pragma once

#include "dopid/expr.hpp"
#include "dopid/registry.hpp"
#include "dopid/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dopid {

enum class VarKind { Normal, List, ListSubset, ListExact, Nu };

const char* var_kind_name(VarKind k);
VarKind parse_var_kind(const std::string& s);
bool is_list_kind(VarKind k);

struct InscVar {
  std::string name;
  VarKind kind = VarKind::Normal;
  friend bool operator==(const InscVar&, const InscVar&) = default;
};

enum class TemplateClass { Simple, Transfer, SubsetTemplate, ExactTemplate };

const char* template_class_name(TemplateClass c);

struct Inscription {
  std::vector<InscVar> entries;

  // Position of the list entry, or -1 for simple inscriptions.
  int list_position() const;
  // Derived from entry kinds alone; throws if more than one list entry.
  TemplateClass template_class() const;
  std::string str() const;
};

struct Transition {
  std::string name;
  std::optional<std::string> label;  // nullopt = silent
  std::string guard_text;
  ExprPtr guard;

  bool silent() const { return !label.has_value(); }
};

struct Flow {
  size_t place;
  Inscription insc;
};

// One place pattern inside an accepting-marking specification.
struct PlaceSpec {
  enum class Kind { Empty, Exact, AtLeast };
  Kind kind = Kind::Empty;
  std::vector<Token> tokens;  // Exact
  int at_least = 0;           // AtLeast
};

// Places that are not listed are Empty.
struct MarkingSpec {
  std::map<std::string, PlaceSpec> places;
};

struct Place {
  std::string name;
  std::vector<Type> color;
};

/// An accepting DOPID. Immutable after load_model.
struct Net {
  TypeRegistry registry;
  std::map<std::string, Type> variables;  // declared inscription variables
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<std::vector<Flow>> inputs;   // per transition, F_in(p, t)
  std::vector<std::vector<Flow>> outputs;  // per transition, F_out(t, p)
  std::vector<MarkingSpec> initial;
  std::vector<MarkingSpec> final;

  size_t place_index(const std::string& name) const;
  size_t transition_index(const std::string& name) const;
  std::optional<size_t> find_place(const std::string& name) const;
  std::optional<size_t> find_transition(const std::string& name) const;

  std::set<size_t> preset(size_t t) const;
  std::set<size_t> postset(size_t t) const;
  std::set<std::string> preset(const std::string& t) const;
  std::set<std::string> postset(const std::string& t) const;

  const Inscription* in_flow(size_t p, size_t t) const;
  const Inscription* out_flow(size_t t, size_t p) const;

  // Base names of the variables in the input (resp. output) inscriptions.
  std::set<std::string> invars(size_t t) const;
  std::set<std::string> outvars(size_t t) const;
  std::set<std::string> vars(size_t t) const;

  // Variables of t with a data (non-object) type.
  std::vector<std::string> data_vars(size_t t) const;
  bool has_nu(size_t t) const;
  bool any_nu() const;

  // Type of an inscription entry: the declared type of its base variable.
  const Type& var_type(const std::string& name) const;
};

}  // namespace dopid
