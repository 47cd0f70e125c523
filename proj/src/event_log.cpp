#include "dopid/event_log.hpp"

#include <algorithm>

namespace dopid {

const Event& EventLog::event(const std::string& id) const {
  auto it = events.find(id);
  if (it == events.end()) throw std::invalid_argument("unknown event '" + id + "'");
  return it->second;
}

namespace {

Type builtin_type(const std::string& name, const std::string& path) {
  if (name == "bool") return Type::boolean();
  if (name == "int") return Type::integer();
  if (name == "rat") return Type::rational();
  if (name == "string") return Type::string();
  throw DocumentError(path, "attribute type must be bool, int, rat or string, got '" + name + "'");
}

}  // namespace

EventLog load_log(const Json& doc) {
  if (!doc.is_object()) throw DocumentError("", "expected an object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "objects" && it.key() != "events" && it.key() != "attributes")
      throw DocumentError("", "unknown field '" + it.key() + "'");
  EventLog log;
  if (!doc.contains("objects") || !doc["objects"].is_object())
    throw DocumentError("objects", "expected an object mapping ids to types");
  for (auto it = doc["objects"].begin(); it != doc["objects"].end(); ++it) {
    if (!it.value().is_string()) throw DocumentError("objects." + it.key(), "expected a type name");
    log.objects[it.key()] = it.value().get<std::string>();
  }
  if (doc.contains("attributes")) {
    if (!doc["attributes"].is_object()) throw DocumentError("attributes", "expected an object");
    for (auto it = doc["attributes"].begin(); it != doc["attributes"].end(); ++it) {
      if (!it.value().is_string()) throw DocumentError("attributes." + it.key(), "expected a type name");
      log.attribute_types[it.key()] = builtin_type(it.value().get<std::string>(), "attributes." + it.key());
    }
  }
  if (!doc.contains("events") || !doc["events"].is_array()) throw DocumentError("events", "expected an array");
  TypeRegistry empty;
  const Json& evs = doc["events"];
  for (size_t i = 0; i < evs.size(); ++i) {
    std::string path = "events[" + std::to_string(i) + "]";
    const Json& ej = evs[i];
    if (!ej.is_object()) throw DocumentError(path, "expected an object");
    for (auto it = ej.begin(); it != ej.end(); ++it)
      if (it.key() != "id" && it.key() != "activity" && it.key() != "objects" && it.key() != "time" &&
          it.key() != "vmap")
        throw DocumentError(path, "unknown field '" + it.key() + "'");
    Event e;
    for (const char* k : {"id", "activity"}) {
      if (!ej.contains(k) || !ej[k].is_string()) throw DocumentError(path + "." + k, "expected a string");
    }
    e.id = ej["id"].get<std::string>();
    e.activity = ej["activity"].get<std::string>();
    if (!ej.contains("time") || !ej["time"].is_number_integer())
      throw DocumentError(path + ".time", "expected an integer timestamp");
    e.time = Integer(ej["time"].dump());
    if (!ej.contains("objects") || !ej["objects"].is_array())
      throw DocumentError(path + ".objects", "expected an array of object ids");
    for (const auto& o : ej["objects"]) {
      if (!o.is_string()) throw DocumentError(path + ".objects", "expected object id strings");
      auto id = o.get<std::string>();
      if (!log.objects.count(id)) throw DocumentError(path + ".objects", "undeclared object '" + id + "'");
      e.objects.insert(id);
    }
    if (e.objects.empty()) throw DocumentError(path + ".objects", "an event must involve at least one object");
    if (ej.contains("vmap")) {
      if (!ej["vmap"].is_object()) throw DocumentError(path + ".vmap", "expected an object");
      for (auto it = ej["vmap"].begin(); it != ej["vmap"].end(); ++it) {
        std::string apath = path + ".vmap." + it.key();
        auto decl = log.attribute_types.find(it.key());
        e.attrs[it.key()] = decl != log.attribute_types.end() ? value_from_json(it.value(), decl->second, empty, apath)
                                                              : infer_value(it.value(), apath);
      }
    }
    if (log.events.count(e.id)) throw DocumentError(path + ".id", "duplicate event id '" + e.id + "'");
    log.events.emplace(e.id, std::move(e));
  }

  // per object, timestamps must be pairwise distinct
  std::map<std::string, std::map<Integer, std::string>> seen;
  for (const auto& [id, e] : log.events) {
    for (const auto& o : e.objects) {
      auto [it, fresh] = seen[o].emplace(e.time, id);
      if (!fresh)
        throw DocumentError("events", "events '" + it->second + "' and '" + id + "' share object '" + o +
                                          "' and timestamp " + e.time.str());
    }
  }
  return log;
}

EventLog load_log_text(const std::string& text) { return load_log(parse_json_text(text, "log document")); }

EventLog load_log_file(const std::string& path) { return load_log_text(read_file(path)); }

std::map<std::string, std::set<std::string>> object_graph(const EventLog& log) {
  std::map<std::string, std::set<std::string>> g;
  for (const auto& [id, type] : log.objects) g[id];
  for (const auto& [id, e] : log.events)
    for (const auto& a : e.objects)
      for (const auto& b : e.objects)
        if (a != b) g[a].insert(b);
  return g;
}

std::vector<std::string> trace_of_object(const EventLog& log, const std::string& o) {
  if (!log.objects.count(o)) throw std::invalid_argument("unknown object '" + o + "'");
  std::vector<std::pair<Integer, std::string>> evs;
  for (const auto& [id, e] : log.events)
    if (e.objects.count(o)) evs.emplace_back(e.time, id);
  std::sort(evs.begin(), evs.end());
  std::vector<std::string> out;
  for (auto& [t, id] : evs) out.push_back(id);
  return out;
}

size_t TraceGraph::object_occurrences(const EventLog& log) const {
  size_t n = 0;
  for (const auto& e : events) n += log.event(e).objects.size();
  return n;
}

std::vector<TraceGraph> trace_graphs(const EventLog& log) {
  auto g = object_graph(log);
  std::set<std::string> visited;
  std::vector<std::pair<std::pair<Integer, std::string>, TraceGraph>> comps;
  for (const auto& [start, _] : g) {
    if (visited.count(start)) continue;
    std::set<std::string> comp;
    std::vector<std::string> stack{start};
    visited.insert(start);
    while (!stack.empty()) {
      auto o = stack.back();
      stack.pop_back();
      comp.insert(o);
      for (const auto& n : g[o])
        if (visited.insert(n).second) stack.push_back(n);
    }
    TraceGraph tg;
    tg.objects = comp;
    std::vector<std::pair<Integer, std::string>> evs;
    for (const auto& [id, e] : log.events) {
      bool hit = false;
      for (const auto& o : e.objects) hit = hit || comp.count(o);
      if (hit) evs.emplace_back(e.time, id);
    }
    if (evs.empty()) continue;
    std::sort(evs.begin(), evs.end());
    for (auto& [t, id] : evs) tg.events.push_back(id);
    for (const auto& o : comp) {
      auto tr = trace_of_object(log, o);
      for (size_t i = 0; i + 1 < tr.size(); ++i) tg.edges.emplace(tr[i], tr[i + 1]);
    }
    comps.emplace_back(evs.front(), std::move(tg));
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<TraceGraph> out;
  for (auto& c : comps) out.push_back(std::move(c.second));
  return out;
}

}  // namespace dopid
