#include "dopid/bounds.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace dopid {

size_t longest_silent_path(const Net& net) {
  std::vector<size_t> nodes;
  for (size_t t = 0; t < net.transitions.size(); ++t)
    if (net.transitions[t].silent() && !net.has_nu(t)) nodes.push_back(t);
  std::map<size_t, std::vector<size_t>> succ;
  for (size_t a : nodes) {
    auto post = net.postset(a);
    for (size_t b : nodes) {
      auto pre = net.preset(b);
      if (std::any_of(post.begin(), post.end(), [&](size_t p) { return pre.count(p) > 0; })) succ[a].push_back(b);
    }
  }
  std::map<size_t, size_t> memo;
  std::set<size_t> active;
  std::function<size_t(size_t)> longest = [&](size_t t) -> size_t {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    if (!active.insert(t).second)
      throw std::runtime_error("silent transition '" + net.transitions[t].name + "' lies on a silent cycle");
    size_t best = 0;
    for (size_t s : succ[t]) best = std::max(best, longest(s));
    active.erase(t);
    return memo[t] = best + 1;
  };
  size_t k = 0;
  for (size_t t : nodes) k = std::max(k, longest(t));
  return k;
}

std::set<std::string> fresh_types(const Net& net) {
  std::set<std::string> out;
  for (size_t t = 0; t < net.transitions.size(); ++t) {
    auto in = net.invars(t);
    for (const auto& v : net.outvars(t)) {
      const Type& ty = net.var_type(v);
      if (ty.is_object() && !in.count(v)) out.insert(ty.name);
    }
  }
  return out;
}

ObjectUniverse make_universe(const Net& net, const EventLog& log, const TraceGraph& tg, size_t pool_size) {
  std::set<std::pair<std::string, std::string>> objs;  // (type, id)
  for (const auto& o : tg.objects) objs.emplace(log.objects.at(o), o);
  auto from_specs = [&](const std::vector<MarkingSpec>& specs) {
    for (const auto& spec : specs)
      for (const auto& [place, ps] : spec.places)
        for (const auto& tok : ps.tokens)
          for (const auto& v : tok)
            if (v.is_object()) objs.emplace(v.as_object().type, v.as_object().id);
  };
  from_specs(net.initial);
  from_specs(net.final);
  ObjectUniverse u;
  for (const auto& type : fresh_types(net)) {
    auto& pool = u.synthetic[type];
    for (size_t i = 1; i <= pool_size; ++i) {
      pool.push_back(Value::object(synthetic_id(type, i), type));
      objs.emplace(type, synthetic_id(type, i));
    }
  }
  for (const auto& [type, id] : objs) u.objects.push_back(Value::object(id, type));
  return u;
}

std::optional<Run> find_witness(const Net& net, const Pools& pools, size_t max_len, size_t budget) {
  struct Node {
    Marking m;
    SyntheticUse used;
    Run run;
  };
  std::deque<Node> queue;
  std::set<std::pair<Marking, SyntheticUse>> visited;
  for (const auto& spec : net.initial) {
    try {
      Marking m = marking_of(net, spec);
      if (visited.emplace(m, SyntheticUse{}).second) queue.push_back({m, {}, {}});
    } catch (const std::invalid_argument&) {
    }
  }
  size_t explored = 0;
  while (!queue.empty() && explored < budget) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    ++explored;
    for (const auto& f : net.final)
      if (matches(net, cur.m, f)) return cur.run;
    if (cur.run.size() >= max_len) continue;
    for (size_t t = 0; t < net.transitions.size(); ++t) {
      for (const auto& b : candidate_bindings(net, cur.m, t, pools, cur.used)) {
        Marking next = fire_unchecked(net, cur.m, t, b);
        auto used = advance_use(cur.used, pools, b);
        if (!visited.emplace(next, used).second) continue;
        Run r = cur.run;
        r.push_back({t, b});
        queue.push_back({std::move(next), std::move(used), std::move(r)});
      }
    }
  }
  return std::nullopt;
}

Bounds compute_bounds(const Net& net, const EventLog& log, const TraceGraph& tg, const BoundsConfig& cfg) {
  Bounds b;
  b.events = tg.events.size();
  b.m = tg.object_occurrences(log);
  b.trace_order = tg.events;
  b.nu = net.any_nu();
  try {
    b.k = longest_silent_path(net);
  } catch (const std::runtime_error& e) {
    if (!cfg.max_run_len)
      throw std::runtime_error(std::string(e.what()) + "; the run length is unbounded, pass an explicit bound");
    b.k = 0;
  }

  size_t cap = 1;
  for (const auto& id : tg.events) {
    const auto& e = log.event(id);
    b.max_event_objects = std::max(b.max_event_objects, e.objects.size());
    std::map<std::string, size_t> per_type;
    for (const auto& o : e.objects) cap = std::max(cap, ++per_type[log.objects.at(o)]);
  }
  b.capacity = cfg.list_capacity ? *cfg.list_capacity : cap;
  for (const auto& p : net.places) {
    size_t d = 0;
    for (const auto& ty : p.color) d += ty.is_data();
    b.max_data = std::max(b.max_data, d);
  }

  Pools wp;
  wp.universe = make_universe(net, log, tg, cfg.objects_extra ? *cfg.objects_extra : 2);
  wp.values = default_value_pools(net, &log);
  wp.list_capacity = b.capacity;
  b.witness = find_witness(net, wp, 1000, cfg.witness_budget);
  if (b.witness) {
    b.c_from_witness = true;
    for (const auto& s : *b.witness)
      if (!net.transitions[s.transition].silent()) b.c += step_objects(net, s).size();
  } else {
    b.c = 2 * b.m;
  }
  b.n_formula = b.nu ? (b.events + 3 * b.c + 2 * b.m) * (b.k + 1) : (b.events + b.c + b.m) * (b.k + 1);
  b.n = cfg.max_run_len ? *cfg.max_run_len : b.n_formula;
  size_t pool = cfg.objects_extra ? std::min(*cfg.objects_extra, b.n) : b.n;
  b.universe = make_universe(net, log, tg, pool);
  return b;
}

Pools make_pools(const Net& net, const EventLog& log, const Bounds& b) {
  Pools p;
  p.universe = b.universe;
  p.values = default_value_pools(net, &log);
  p.list_capacity = b.capacity;
  return p;
}

}  // namespace dopid
