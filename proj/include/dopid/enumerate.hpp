#pragma once

#include "dopid/event_log.hpp"
#include "dopid/token_game.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace dopid {

// The finite object set O: log objects, objects named in marking specs and
// per-type pools of synthetic ids for fresh-object creation. Sorted by
// (type, id) so the ids of one type are contiguous; code(o) = index + 1.
struct ObjectUniverse {
  std::vector<Value> objects;
  std::map<std::string, std::vector<Value>> synthetic;  // type -> pool in creation order

  std::vector<Value> of_type(const std::string& type) const;
  int code(const Value& obj) const;  // 0 if absent
  bool is_synthetic(const Value& obj) const;
  // Position in its synthetic pool, or -1.
  int synthetic_index(const Value& obj) const;
};

std::string synthetic_id(const std::string& type, size_t i);  // 1-based

// Candidate values for output-only data variables (and for input variables
// that no token determines, e.g. the key of an empty =-list).
struct Pools {
  ObjectUniverse universe;
  std::map<std::string, std::vector<Value>> values;
  size_t list_capacity = 0;    // 0 = unbounded
  bool key_functional = true;  // skip firings leaving two tokens with equal object key in a place
};

// Synthetic ids used so far, per type: always a prefix of the pool.
using SyntheticUse = std::map<std::string, size_t>;

// Log attribute values of the same name, guard literals (and their
// neighbours for arithmetic types), 0, and "#other" for strings.
std::map<std::string, std::vector<Value>> default_value_pools(const Net& net, const EventLog* log);

// The value of type t that a log attribute value v matches under
// values_match, if any.
std::optional<Value> coerce_value(const Value& v, const Type& t, const TypeRegistry& reg);

inline const char* kOtherSymbol = "#other";

// Every binding b of t that is enabled in m, draws objects from the universe
// (synthetics only in pool order) and, when requested, keeps keys functional.
// Deterministic order.
std::vector<Binding> candidate_bindings(const Net& net, const Marking& m, size_t t, const Pools& pools,
                                        const SyntheticUse& used, bool* fresh_exhausted = nullptr);

SyntheticUse advance_use(const SyntheticUse& used, const Pools& pools, const Binding& b);

// False iff two tokens of one place agree on every object component.
bool key_functional(const Marking& m);

struct EnumerationStats {
  size_t runs = 0;
  size_t states = 0;
  bool fresh_exhausted = false;  // some nu firing lacked a fresh id
};

// Calls visit on every accepted run of length <= max_len, in lexicographic
// order of (transition index, binding). visit returns false to stop.
EnumerationStats enumerate_runs(const Net& net, size_t max_len, const Pools& pools,
                                const std::function<bool(const Run&)>& visit);

}  // namespace dopid
