#pragma once

#include "dopid/enumerate.hpp"

#include <optional>

namespace dopid {

struct BoundsConfig {
  std::optional<size_t> max_run_len;    // overrides n
  std::optional<size_t> objects_extra;  // synthetic ids per type (default n)
  std::optional<size_t> list_capacity;  // objects per list variable
  size_t witness_budget = 50000;        // states explored when looking for a witness run
};

struct Bounds {
  size_t events = 0;  // |E_X|
  size_t m = 0;       // object occurrences in E_X
  size_t c = 0;       // object occurrences in the visible steps of a witness run
  size_t k = 0;       // longest silent sequence without nu
  bool nu = false;
  size_t n_formula = 0;
  size_t n = 0;  // run-length bound in use
  size_t capacity = 1;
  size_t max_event_objects = 0;
  size_t max_data = 0;  // data components per token
  bool c_from_witness = false;
  ObjectUniverse universe;
  std::vector<std::string> trace_order;
  std::optional<Run> witness;
};

// Length of the longest sequence of silent transitions without nu outputs,
// where t may follow t' when post(t') meets pre(t). Throws on a cycle.
size_t longest_silent_path(const Net& net);

// Object types that need synthetic ids: types of nu variables and of
// object variables that occur only in output inscriptions.
std::set<std::string> fresh_types(const Net& net);

ObjectUniverse make_universe(const Net& net, const EventLog& log, const TraceGraph& tg, size_t pool_size);

// Shortest accepted run found by breadth-first search within the budget.
std::optional<Run> find_witness(const Net& net, const Pools& pools, size_t max_len, size_t budget);

Bounds compute_bounds(const Net& net, const EventLog& log, const TraceGraph& tg, const BoundsConfig& cfg);

// Pools shared by the oracle and the encoder for a given bounds object.
Pools make_pools(const Net& net, const EventLog& log, const Bounds& b);

}  // namespace dopid
