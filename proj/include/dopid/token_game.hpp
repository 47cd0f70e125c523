#pragma once

#include "dopid/eval.hpp"
#include "dopid/json_values.hpp"
#include "dopid/net.hpp"

#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace dopid {

// Tokens per place, indexed like Net::places.
using Marking = std::vector<std::set<Token>>;

Marking empty_marking(const Net& net);
// Concrete marking of an initial specification (Empty/Exact only).
Marking marking_of(const Net& net, const MarkingSpec& spec);
bool matches(const Net& net, const Marking& m, const MarkingSpec& spec);
std::string marking_str(const Net& net, const Marking& m);
Json marking_to_json(const Net& net, const Marking& m);

// Decides satisfiability of a ground guard whose evaluation needs a function
// without interpretation table (a per-step solver query).
using GuardOracle = std::function<bool(const Net&, size_t t, const Binding&)>;

// Token set of an inscription under a binding (the b-vector extension).
std::set<Token> instantiate_inscription(const Net& net, const Inscription& insc, const Binding& b);

enum class Reason { BadBinding, NotFresh, NotContained, GuardFalse, GuardUndefined, Maximality, FinalMismatch };
const char* reason_name(Reason r);

struct Finding {
  Reason reason;
  std::string detail;
};

struct EnableReport {
  std::vector<Finding> findings;
  bool enabled() const { return findings.empty(); }
  bool has(Reason r) const;
};

// Checks every enablement condition and collects all violations.
EnableReport check_enabled(const Net& net, const Marking& m, size_t t, const Binding& b,
                           const GuardOracle* oracle = nullptr);
bool enabled(const Net& net, const Marking& m, size_t t, const Binding& b, const GuardOracle* oracle = nullptr);

// Binding well-formedness only (types, list duplicates, nu injectivity and freshness).
std::vector<Finding> check_binding(const Net& net, const Marking& m, size_t t, const Binding& b);

bool guard_holds(const Net& net, size_t t, const Binding& b, const GuardOracle* oracle, std::string* why = nullptr);

// Applies the firing rule; throws std::logic_error when not enabled.
Marking fire(const Net& net, const Marking& m, size_t t, const Binding& b, const GuardOracle* oracle = nullptr);
// Firing rule without the enablement check.
Marking fire_unchecked(const Net& net, const Marking& m, size_t t, const Binding& b);

struct Step {
  size_t transition;
  Binding binding;
};
using Run = std::vector<Step>;

struct ReplayOutcome {
  bool accepted = false;
  size_t step = 0;  // failing step index (0-based); == run.size() for final mismatch
  std::vector<Finding> findings;
  Marking final_marking;
  int initial_spec = -1;
  int final_spec = -1;
};

// Tries each initial specification in order; reports the attempt that got furthest.
ReplayOutcome replay(const Net& net, const Run& run, const GuardOracle* oracle = nullptr);
ReplayOutcome replay_from(const Net& net, const Run& run, const Marking& start, const GuardOracle* oracle = nullptr);

// Run documents: [{"transition": name, "binding": {var: value}}].
Run load_run(const Net& net, const Json& doc);
Json run_to_json(const Net& net, const Run& run);
Json replay_to_json(const Net& net, const Run& run, const ReplayOutcome& out);

// Objects (range(b) ∩ O) and data assignment (variables of data type) of a step.
std::set<std::string> step_objects(const Net& net, const Step& s);
std::map<std::string, Value> step_data(const Net& net, const Step& s);

}  // namespace dopid
