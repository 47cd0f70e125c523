#pragma once

#include "dopid/bounds.hpp"
#include "dopid/decoder.hpp"
#include "dopid/oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dopid {

struct CheckOptions {
  BoundsConfig bounds;
  SolverConfig solver;
  bool oracle = false;   // brute force instead of the solver
  size_t jobs = 1;       // trace graphs aligned concurrently
  std::optional<unsigned> seed;
  std::string emit_dir;  // component-<i>.smt2 per trace graph when set
  bool keep_transcript = false;
  // Restricts free data of the encoding to the oracle's pools.
  bool pool_domains = false;
};

enum class ComponentStatus { Optimal, Incumbent, Error };
const char* component_status_name(ComponentStatus s);

struct ComponentReport {
  size_t index = 0;
  std::vector<std::string> events;
  std::vector<std::string> objects;
  Bounds bounds;
  ComponentStatus status = ComponentStatus::Error;
  std::string error;
  size_t cost = 0;
  size_t trivial_cost = 0;  // all log moves plus the model moves of the run
  double fitness = 0;
  Run run;
  AlignmentGraph alignment;
  bool replay_accepted = false;
  // solver
  size_t queries = 0;
  std::vector<long long> probes;
  std::string transcript;
  // oracle
  size_t oracle_states = 0;
};

struct CheckReport {
  std::string method;  // "smt" or "oracle"
  std::vector<ComponentReport> components;
  size_t total_cost = 0;
  double fitness = 1;
  bool ok() const;  // every component aligned optimally
};

// Aligns one trace graph.
ComponentReport check_component(const Net& net, const EventLog& log, const TraceGraph& tg, size_t index,
                                 const CheckOptions& opts);

CheckReport run_check(const Net& net, const EventLog& log, const CheckOptions& opts);

Json check_report_to_json(const Net& net, const CheckReport& r);

Json log_stats(const EventLog& log);

}  // namespace dopid
