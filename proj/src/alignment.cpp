#include "dopid/alignment.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace dopid {

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::Log: return "log";
    case MoveKind::Model: return "model";
    case MoveKind::Sync: return "sync";
  }
  return "?";
}

MoveKind Move::kind() const {
  if (log && model) return MoveKind::Sync;
  return log ? MoveKind::Log : MoveKind::Model;
}

LogPart log_part(const Event& e) { return {e.id, e.activity, e.objects, e.attrs}; }

ModelPart model_part(const Net& net, const Run& run, size_t step) {
  const auto& s = run.at(step);
  ModelPart mp;
  mp.step = step;
  mp.transition = s.transition;
  mp.label = net.transitions[s.transition].label;
  mp.binding = s.binding;
  mp.objects = step_objects(net, s);
  mp.data = step_data(net, s);
  return mp;
}

namespace {

size_t mismatches(const std::map<std::string, Value>& a, const std::map<std::string, Value>& b) {
  std::set<std::string> names;
  for (const auto& [k, v] : a) names.insert(k);
  for (const auto& [k, v] : b) names.insert(k);
  size_t n = 0;
  for (const auto& k : names) {
    auto x = a.find(k);
    auto y = b.find(k);
    if (x == a.end() || y == b.end() || !values_match(x->second, y->second)) ++n;
  }
  return n;
}

}  // namespace

size_t move_cost(const Move& m) {
  switch (m.kind()) {
    case MoveKind::Log:
      return m.log->objects.size() + m.log->attrs.size();
    case MoveKind::Model:
      if (!m.model->label) return 0;
      return m.model->objects.size() + m.model->data.size();
    case MoveKind::Sync:
      return mismatches(m.log->attrs, m.model->data);
  }
  return 0;
}

size_t alignment_cost(const AlignmentGraph& g) {
  size_t c = 0;
  for (const auto& m : g.moves) c += move_cost(m);
  return c;
}

size_t log_penalty(const Event& e) { return e.objects.size() + e.attrs.size(); }

size_t model_penalty(const Net& net, const Step& s) {
  if (net.transitions[s.transition].silent()) return 0;
  return step_objects(net, s).size() + step_data(net, s).size();
}

std::optional<size_t> sync_penalty(const Net& net, const Event& e, const Step& s) {
  const auto& label = net.transitions[s.transition].label;
  if (!label || *label != e.activity) return std::nullopt;
  if (step_objects(net, s) != e.objects) return std::nullopt;
  return mismatches(e.attrs, step_data(net, s));
}

std::vector<const Event*> trace_sequence(const EventLog& log, const TraceGraph& tg) {
  std::vector<const Event*> out;
  for (const auto& id : tg.events) out.push_back(&log.event(id));
  return out;
}

EditResult align_sequences(const Net& net, const std::vector<const Event*>& events, const Run& run) {
  const size_t m = events.size(), n = run.size();
  const size_t inf = std::numeric_limits<size_t>::max() / 4;
  std::vector<size_t> pl(m), pm(n);
  for (size_t i = 0; i < m; ++i) pl[i] = log_penalty(*events[i]);
  for (size_t j = 0; j < n; ++j) pm[j] = model_penalty(net, run[j]);
  std::vector<std::vector<size_t>> d(m + 1, std::vector<size_t>(n + 1, 0));
  for (size_t i = 1; i <= m; ++i) d[i][0] = d[i - 1][0] + pl[i - 1];
  for (size_t j = 1; j <= n; ++j) d[0][j] = d[0][j - 1] + pm[j - 1];
  std::vector<std::vector<size_t>> pe(m, std::vector<size_t>(n, inf));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j)
      if (auto p = sync_penalty(net, *events[i], run[j])) pe[i][j] = *p;
  for (size_t i = 1; i <= m; ++i)
    for (size_t j = 1; j <= n; ++j)
      d[i][j] = std::min({d[i - 1][j] + pl[i - 1], d[i][j - 1] + pm[j - 1], d[i - 1][j - 1] + pe[i - 1][j - 1]});
  EditResult r;
  r.cost = d[m][n];
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (j == 0 || (i > 0 && d[i][j] == d[i - 1][j] + pl[i - 1])) {
      r.ops.push_back(Op::Log);
      --i;
    } else if (i == 0 || d[i][j] == d[i][j - 1] + pm[j - 1]) {
      r.ops.push_back(Op::Model);
      --j;
    } else {
      r.ops.push_back(Op::Sync);
      --i;
      --j;
    }
  }
  std::reverse(r.ops.begin(), r.ops.end());
  return r;
}

AlignmentGraph build_alignment(const Net& net, const std::vector<const Event*>& events, const TraceGraph& tg,
                               const Run& run, const std::vector<Op>& ops) {
  AlignmentGraph g;
  std::map<std::string, size_t> event_node;
  std::vector<size_t> step_node(run.size());
  size_t i = 0, j = 0;
  for (Op op : ops) {
    Move mv;
    if (op != Op::Model) {
      mv.log = log_part(*events.at(i));
      event_node[events[i]->id] = g.moves.size();
      ++i;
    }
    if (op != Op::Log) {
      mv.model = model_part(net, run, j);
      step_node.at(j) = g.moves.size();
      ++j;
    }
    g.moves.push_back(std::move(mv));
  }
  if (i != events.size() || j != run.size()) throw std::invalid_argument("operation sequence does not cover trace and run");
  for (const auto& [a, b] : tg.edges) g.edges.emplace(event_node.at(a), event_node.at(b), EdgeKind::Log);
  for (size_t k = 0; k + 1 < run.size(); ++k) g.edges.emplace(step_node[k], step_node[k + 1], EdgeKind::Model);
  return g;
}

namespace {

bool acyclic(size_t nodes, const std::set<std::tuple<size_t, size_t, EdgeKind>>& edges) {
  std::vector<size_t> indeg(nodes, 0);
  std::vector<std::vector<size_t>> succ(nodes);
  for (const auto& [a, b, k] : edges) {
    succ[a].push_back(b);
    ++indeg[b];
  }
  std::vector<size_t> ready;
  for (size_t v = 0; v < nodes; ++v)
    if (!indeg[v]) ready.push_back(v);
  size_t seen = 0;
  while (!ready.empty()) {
    size_t v = ready.back();
    ready.pop_back();
    ++seen;
    for (size_t w : succ[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  return seen == nodes;
}

std::string set_str(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x;
  return out + "}";
}

}  // namespace

AlignmentReport validate_alignment(const AlignmentGraph& g, const TraceGraph& tg, const EventLog& log, const Net& net) {
  AlignmentReport rep;
  auto problem = [&](const std::string& s) { rep.problems.push_back(s); };
  const size_t N = g.moves.size();
  std::set<std::string> tg_events(tg.events.begin(), tg.events.end());

  for (size_t k = 0; k < N; ++k) {
    const auto& mv = g.moves[k];
    std::string where = "move " + std::to_string(k);
    if (!mv.log && !mv.model) {
      problem(where + " has neither a log nor a model part");
      continue;
    }
    if (mv.log) {
      if (!tg_events.count(mv.log->event)) {
        problem(where + ": event '" + mv.log->event + "' is not in the trace graph");
      } else {
        const auto& e = log.event(mv.log->event);
        if (e.activity != mv.log->activity || e.objects != mv.log->objects || e.attrs != mv.log->attrs)
          problem(where + ": log part differs from event '" + e.id + "'");
      }
    }
    if (mv.model) {
      const auto& mp = *mv.model;
      if (mp.transition >= net.transitions.size()) {
        problem(where + ": unknown transition");
        continue;
      }
      Step s{mp.transition, mp.binding};
      if (mp.label != net.transitions[mp.transition].label) problem(where + ": label differs from its transition");
      if (step_objects(net, s) != mp.objects || step_data(net, s) != mp.data)
        problem(where + ": objects or data differ from the binding");
    }
    if (mv.log && mv.model) {
      if (!mv.model->label || *mv.model->label != mv.log->activity)
        problem(where + ": synchronous move with activities '" + mv.log->activity + "' and '" +
                mv.model->label.value_or("tau") + "'");
      if (mv.model->objects != mv.log->objects)
        problem(where + ": synchronous move with object sets " + set_str(mv.log->objects) + " and " +
                set_str(mv.model->objects));
    }
  }

  bool edges_ok = true;
  for (const auto& [a, b, kind] : g.edges) {
    if (a >= N || b >= N) {
      problem("edge out of range");
      edges_ok = false;
      continue;
    }
    bool ok = kind == EdgeKind::Log ? (g.moves[a].log && g.moves[b].log) : (g.moves[a].model && g.moves[b].model);
    if (!ok) {
      problem("edge " + std::to_string(a) + "->" + std::to_string(b) + " joins nodes without the parts it relates");
      edges_ok = false;
    }
  }
  if (!edges_ok) return rep;
  if (!acyclic(N, g.edges)) problem("the graph has a cycle");

  // log projection
  std::map<std::string, size_t> node_of;
  for (size_t k = 0; k < N; ++k) {
    if (!g.moves[k].log) continue;
    if (!node_of.emplace(g.moves[k].log->event, k).second)
      problem("event '" + g.moves[k].log->event + "' occurs in two moves");
  }
  for (const auto& e : tg.events)
    if (!node_of.count(e)) problem("event '" + e + "' has no move");
  std::set<std::pair<std::string, std::string>> projected;
  for (const auto& [a, b, kind] : g.edges)
    if (kind == EdgeKind::Log) projected.emplace(g.moves[a].log->event, g.moves[b].log->event);
  if (projected != tg.edges) problem("log projection edges differ from the trace graph");

  // model projection: some linearization respecting model edges is an accepted run
  std::vector<size_t> nodes;
  for (size_t k = 0; k < N; ++k)
    if (g.moves[k].model) nodes.push_back(k);
  std::stable_sort(nodes.begin(), nodes.end(),
                   [&](size_t a, size_t b) { return g.moves[a].model->step < g.moves[b].model->step; });
  std::map<size_t, size_t> pos;
  for (size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
  std::vector<std::vector<size_t>> preds(nodes.size());
  for (const auto& [a, b, kind] : g.edges)
    if (kind == EdgeKind::Model) preds[pos[b]].push_back(pos[a]);

  auto step_of = [&](size_t i) { return Step{g.moves[nodes[i]].model->transition, g.moves[nodes[i]].model->binding}; };
  std::set<std::pair<std::vector<bool>, Marking>> failed;
  std::vector<size_t> order;
  bool found = false;
  std::function<bool(std::vector<bool>&, const Marking&)> search = [&](std::vector<bool>& placed, const Marking& m) {
    if (order.size() == nodes.size()) {
      for (const auto& f : net.final)
        if (matches(net, m, f)) return true;
      return false;
    }
    auto key = std::make_pair(placed, m);
    if (failed.count(key)) return false;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (size_t p : preds[i]) ready = ready && placed[p];
      if (!ready) continue;
      Step s = step_of(i);
      if (!enabled(net, m, s.transition, s.binding)) continue;
      placed[i] = true;
      order.push_back(i);
      if (search(placed, fire_unchecked(net, m, s.transition, s.binding))) return true;
      order.pop_back();
      placed[i] = false;
    }
    failed.insert(key);
    return false;
  };
  for (const auto& spec : net.initial) {
    Marking m0;
    try {
      m0 = marking_of(net, spec);
    } catch (const std::invalid_argument&) {
      continue;
    }
    std::vector<bool> placed(nodes.size(), false);
    order.clear();
    if (search(placed, m0)) {
      found = true;
      break;
    }
  }
  if (found) {
    for (size_t i : order) rep.run.push_back(step_of(i));
  } else {
    Run canonical;
    for (size_t i = 0; i < nodes.size(); ++i) canonical.push_back(step_of(i));
    auto out = replay(net, canonical);
    rep.failing_step = out.step;
    std::string why;
    for (const auto& f : out.findings) why += std::string(" [") + reason_name(f.reason) + "] " + f.detail;
    problem("model projection is not an accepted run; in step order it fails at step " + std::to_string(out.step) +
            ":" + why);
  }
  return rep;
}

namespace {

Json strings(const std::set<std::string>& s) { return Json(std::vector<std::string>(s.begin(), s.end())); }

Json values(const std::map<std::string, Value>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = value_to_json(v);
  return j;
}

}  // namespace

Json alignment_to_json(const Net& net, const AlignmentGraph& g) {
  Json nodes = Json::array();
  for (size_t k = 0; k < g.moves.size(); ++k) {
    const auto& mv = g.moves[k];
    Json n;
    n["id"] = k;
    n["kind"] = move_kind_name(mv.kind());
    n["cost"] = move_cost(mv);
    if (mv.log)
      n["log"] = Json{{"event", mv.log->event},
                      {"activity", mv.log->activity},
                      {"objects", strings(mv.log->objects)},
                      {"attrs", values(mv.log->attrs)}};
    else
      n["log"] = nullptr;
    if (mv.model) {
      const auto& mp = *mv.model;
      n["model"] = Json{{"step", mp.step},
                        {"transition", net.transitions[mp.transition].name},
                        {"label", mp.label ? Json(*mp.label) : Json(nullptr)},
                        {"objects", strings(mp.objects)},
                        {"data", values(mp.data)},
                        {"binding", values(mp.binding)}};
    } else {
      n["model"] = nullptr;
    }
    nodes.push_back(n);
  }
  Json edges = Json::array();
  for (const auto& [a, b, kind] : g.edges)
    edges.push_back(Json{{"from", a}, {"to", b}, {"via", kind == EdgeKind::Log ? "log" : "model"}});
  return Json{{"cost", alignment_cost(g)}, {"nodes", nodes}, {"edges", edges}};
}

}  // namespace dopid
