#pragma once

#include "dopid/event_log.hpp"
#include "dopid/net_io.hpp"
#include "dopid/solver.hpp"

#include <optional>
#include <random>

namespace dopid::testing {

// One ground guard case: an expression over a fixed registry and a binding
// for its variables.
struct GuardCase {
  ExprPtr expr;
  Binding binding;
};

struct GuardWorld {
  TypeRegistry registry;
  TypeEnv env;
  std::vector<std::string> objects;  // ids of object type "a"
  std::vector<std::string> strings;  // string values in play
};

GuardWorld guard_world();
GuardCase random_guard(std::mt19937_64& rng, const GuardWorld& w, int depth = 3);

// Expected truth of a guard under strict evaluation (undefined = false).
bool evaluate_strict(const Expr& e, const Binding& b, const TypeRegistry& reg);

// Logic and function tables, asserted once per solver session.
std::string guard_prelude(const GuardWorld& w);

// Solver query (to be scoped with push/pop) deciding the lowered guard with the binding and the function
// tables asserted as point constraints.
std::string guard_query(const GuardWorld& w, const GuardCase& c, std::mt19937_64& rng);

// A random small DOPID with a log over at most four objects.
struct Instance {
  Json model;
  Json log_doc;
  Net net;
  EventLog log;
  size_t max_len = 0;
};

std::optional<Instance> random_instance(std::mt19937_64& rng);

}  // namespace dopid::testing
