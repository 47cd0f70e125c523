#pragma once

#include "dopid/json_values.hpp"
#include "dopid/value.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace dopid {

struct Event {
  std::string id;
  std::string activity;
  std::set<std::string> objects;
  Integer time;
  std::map<std::string, Value> attrs;
};

struct EventLog {
  std::map<std::string, std::string> objects;  // id -> object type
  std::map<std::string, Type> attribute_types;  // optional declarations
  std::map<std::string, Event> events;

  const Event& event(const std::string& id) const;
};

EventLog load_log(const Json& doc);
EventLog load_log_text(const std::string& text);
EventLog load_log_file(const std::string& path);

// Undirected adjacency over objects: o ~ o' iff some event contains both.
std::map<std::string, std::set<std::string>> object_graph(const EventLog& log);

// Events containing o, ascending by timestamp.
std::vector<std::string> trace_of_object(const EventLog& log, const std::string& o);

struct TraceGraph {
  std::vector<std::string> events;  // ordered by (time, id): the enumeration e_1..e_m
  std::set<std::pair<std::string, std::string>> edges;
  std::set<std::string> objects;

  size_t object_occurrences(const EventLog& log) const;
};

// One graph per connected component of the object graph that has events,
// ordered by the smallest (time, id) of their events.
std::vector<TraceGraph> trace_graphs(const EventLog& log);

}  // namespace dopid
