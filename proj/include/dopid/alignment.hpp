#pragma once

#include "dopid/event_log.hpp"
#include "dopid/token_game.hpp"

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace dopid {

struct LogPart {
  std::string event;
  std::string activity;
  std::set<std::string> objects;
  std::map<std::string, Value> attrs;
};

struct ModelPart {
  size_t step = 0;  // position in the run
  size_t transition = 0;
  std::optional<std::string> label;  // nullopt = tau
  Binding binding;
  std::set<std::string> objects;      // range(b) ∩ O
  std::map<std::string, Value> data;  // b restricted to data-typed variables
};

enum class MoveKind { Log, Model, Sync };
const char* move_kind_name(MoveKind k);

struct Move {
  std::optional<LogPart> log;
  std::optional<ModelPart> model;
  MoveKind kind() const;
};

LogPart log_part(const Event& e);
ModelPart model_part(const Net& net, const Run& run, size_t step);

size_t move_cost(const Move& m);

// Edges induced by the trace graph join log parts; edges between
// consecutive run steps join model parts.
enum class EdgeKind { Log, Model };

struct AlignmentGraph {
  std::vector<Move> moves;
  std::set<std::tuple<size_t, size_t, EdgeKind>> edges;
};

size_t alignment_cost(const AlignmentGraph& g);

// Penalties of the edit distance; sync_penalty is nullopt when the event and
// the step cannot form a synchronous move.
size_t log_penalty(const Event& e);
size_t model_penalty(const Net& net, const Step& s);
std::optional<size_t> sync_penalty(const Net& net, const Event& e, const Step& s);

enum class Op { Log, Model, Sync };

struct EditResult {
  size_t cost = 0;
  std::vector<Op> ops;
};

// Events of the trace graph in (time, id) order.
std::vector<const Event*> trace_sequence(const EventLog& log, const TraceGraph& tg);

// Optimal interleaving of the trace sequence with a run. Ties prefer a log
// move, then a model move, then a synchronous move.
EditResult align_sequences(const Net& net, const std::vector<const Event*>& events, const Run& run);

AlignmentGraph build_alignment(const Net& net, const std::vector<const Event*>& events, const TraceGraph& tg,
                               const Run& run, const std::vector<Op>& ops);

struct AlignmentReport {
  std::vector<std::string> problems;
  std::optional<size_t> failing_step;  // replay failure of the model projection
  Run run;                             // linearization found, when valid
  bool valid() const { return problems.empty(); }
};

AlignmentReport validate_alignment(const AlignmentGraph& g, const TraceGraph& tg, const EventLog& log, const Net& net);

Json alignment_to_json(const Net& net, const AlignmentGraph& g);

}  // namespace dopid
