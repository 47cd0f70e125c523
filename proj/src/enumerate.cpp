#include "dopid/enumerate.hpp"

#include <algorithm>

namespace dopid {

std::vector<Value> ObjectUniverse::of_type(const std::string& type) const {
  std::vector<Value> out;
  for (const auto& o : objects)
    if (o.as_object().type == type) out.push_back(o);
  return out;
}

int ObjectUniverse::code(const Value& obj) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), obj, [](const Value& a, const Value& b) {
    const auto& x = a.as_object();
    const auto& y = b.as_object();
    return std::tie(x.type, x.id) < std::tie(y.type, y.id);
  });
  if (it == objects.end() || !(*it == obj)) return 0;
  return static_cast<int>(it - objects.begin()) + 1;
}

bool ObjectUniverse::is_synthetic(const Value& obj) const { return synthetic_index(obj) >= 0; }

int ObjectUniverse::synthetic_index(const Value& obj) const {
  if (!obj.is_object()) return -1;
  auto it = synthetic.find(obj.as_object().type);
  if (it == synthetic.end()) return -1;
  for (size_t i = 0; i < it->second.size(); ++i)
    if (it->second[i] == obj) return static_cast<int>(i);
  return -1;
}

std::string synthetic_id(const std::string& type, size_t i) { return "_new_" + type + "_" + std::to_string(i); }

namespace {

void collect_literals(const Expr& e, std::vector<Value>& out) {
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::RatLit:
    case ExprKind::StrLit:
    case ExprKind::BoolLit:
      out.push_back(e.literal);
      break;
    default:
      break;
  }
  for (const auto& a : e.args) collect_literals(*a, out);
}

}  // namespace

std::optional<Value> coerce_value(const Value& v, const Type& t, const TypeRegistry& reg) {
  switch (t.kind) {
    case BaseKind::Bool:
      if (v.is_bool()) return v;
      break;
    case BaseKind::Int:
      if (v.is_int()) return v;
      if (v.is_rat() && denominator(v.as_rat()) == 1) return Value::integer(numerator(v.as_rat()));
      break;
    case BaseKind::Rat:
      if (v.is_numeric()) return Value::rational(v.numeric());
      break;
    case BaseKind::String:
      if (v.is_str()) return v;
      if (v.is_finset()) return Value::string(v.as_finset().elem);
      break;
    case BaseKind::FinSet: {
      if (!v.is_str() && !v.is_finset()) break;
      const auto& text = v.symbol();
      const auto& dom = reg.finset_domain(t.name);
      if (std::find(dom.begin(), dom.end(), text) != dom.end()) return Value::finset(t.name, text);
      break;
    }
    case BaseKind::Object:
      break;
  }
  return std::nullopt;
}

std::map<std::string, std::vector<Value>> default_value_pools(const Net& net, const EventLog* log) {
  std::map<std::string, std::set<Value>> pools;
  for (const auto& [name, type] : net.variables) {
    if (type.is_object() || type.list) continue;
    auto& pool = pools[name];
    if (type.kind == BaseKind::Bool) {
      pool = {Value::boolean(false), Value::boolean(true)};
      continue;
    }
    if (type.kind == BaseKind::FinSet) {
      for (const auto& e : net.registry.finset_domain(type.name)) pool.insert(Value::finset(type.name, e));
      continue;
    }
    if (type.kind == BaseKind::Int) pool.insert(Value::integer(0));
    if (type.kind == BaseKind::Rat) pool.insert(Value::rational(0));
    if (type.kind == BaseKind::String) pool.insert(Value::string(kOtherSymbol));
    if (log)
      for (const auto& [id, e] : log->events) {
        auto it = e.attrs.find(name);
        if (it == e.attrs.end()) continue;
        if (auto v = coerce_value(it->second, type, net.registry)) pool.insert(*v);
      }
    for (size_t t = 0; t < net.transitions.size(); ++t) {
      const auto& tr = net.transitions[t];
      if (!tr.guard || !net.vars(t).count(name)) continue;
      std::vector<Value> lits;
      collect_literals(*tr.guard, lits);
      for (const auto& l : lits) {
        auto v = coerce_value(l, type, net.registry);
        if (!v) continue;
        pool.insert(*v);
        if (type.kind == BaseKind::Int) {
          pool.insert(Value::integer(v->as_int() + 1));
          pool.insert(Value::integer(v->as_int() - 1));
        } else if (type.kind == BaseKind::Rat) {
          pool.insert(Value::rational(v->as_rat() + 1));
          pool.insert(Value::rational(v->as_rat() - 1));
        }
      }
    }
  }
  std::map<std::string, std::vector<Value>> out;
  for (auto& [k, s] : pools) out[k] = std::vector<Value>(s.begin(), s.end());
  return out;
}

bool key_functional(const Marking& m) {
  for (const auto& place : m) {
    std::set<std::vector<Value>> keys;
    for (const auto& tok : place) {
      std::vector<Value> key;
      for (const auto& v : tok)
        if (v.is_object()) key.push_back(v);
      if (!keys.insert(key).second) return false;
    }
  }
  return true;
}

SyntheticUse advance_use(const SyntheticUse& used, const Pools& pools, const Binding& b) {
  SyntheticUse out = used;
  auto note = [&](const Value& v) {
    int i = pools.universe.synthetic_index(v);
    if (i < 0) return;
    auto& n = out[v.as_object().type];
    n = std::max(n, static_cast<size_t>(i) + 1);
  };
  for (const auto& [k, v] : b) {
    if (v.is_list())
      for (const auto& x : v.as_list().items) note(x);
    else
      note(v);
  }
  return out;
}

namespace {

bool occurs(const Marking& m, const Value& obj) {
  for (const auto& place : m)
    for (const auto& tok : place)
      for (const auto& v : tok)
        if (v == obj) return true;
  return false;
}

// Ascending sublists of items with at most cap elements (cap 0 = any).
void sublists(const std::vector<Value>& items, size_t cap, std::vector<std::vector<Value>>& out) {
  std::vector<Value> cur;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == items.size()) {
      out.push_back(cur);
      return;
    }
    rec(i + 1);
    if (cap == 0 || cur.size() < cap) {
      cur.push_back(items[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
}

struct Generator {
  const Net& net;
  const Marking& m;
  size_t t;
  const Pools& pools;
  const SyntheticUse& used;
  bool exhausted = false;
  std::set<Binding> partial;

  bool unify(Binding& b, const std::string& var, const Value& v) {
    auto it = b.find(var);
    if (it != b.end()) return it->second == v;
    b.emplace(var, v);
    return true;
  }

  void inputs(size_t fi, Binding b) {
    if (fi == net.inputs[t].size()) {
      partial.insert(std::move(b));
      return;
    }
    const auto& f = net.inputs[t][fi];
    const auto& entries = f.insc.entries;
    int pos = f.insc.list_position();
    const auto& place = m[f.place];
    if (pos < 0) {
      for (const auto& tok : place) {
        Binding b2 = b;
        bool ok = true;
        for (size_t i = 0; ok && i < entries.size(); ++i) ok = unify(b2, entries[i].name, tok[i]);
        if (ok) inputs(fi + 1, std::move(b2));
      }
      return;
    }
    const auto& lv = entries[pos];
    Type elem = net.var_type(lv.name).element();
    // tokens grouped by their non-list components
    std::map<std::vector<Value>, std::vector<Value>> groups;
    for (const auto& tok : place) {
      std::vector<Value> key;
      bool ok = true;
      for (size_t i = 0; i < entries.size(); ++i) {
        if (static_cast<int>(i) == pos) continue;
        auto it = b.find(entries[i].name);
        if (it != b.end() && !(it->second == tok[i])) ok = false;
        key.push_back(tok[i]);
      }
      if (ok) groups[key].push_back(tok[pos]);
    }
    auto bind_key = [&](Binding& b2, const std::vector<Value>& key) {
      size_t k = 0;
      for (size_t i = 0; i < entries.size(); ++i) {
        if (static_cast<int>(i) == pos) continue;
        if (!unify(b2, entries[i].name, key[k++])) return false;
      }
      return true;
    };
    bool bound = b.count(lv.name) > 0;
    for (auto& [key, items] : groups) {
      std::sort(items.begin(), items.end());
      if (bound) {
        Binding b2 = b;
        if (bind_key(b2, key)) inputs(fi + 1, std::move(b2));
        continue;
      }
      std::vector<std::vector<Value>> lists;
      if (lv.kind == VarKind::ListExact) {
        if (pools.list_capacity == 0 || items.size() <= pools.list_capacity) lists.push_back(items);
      } else {
        sublists(items, pools.list_capacity, lists);
      }
      for (auto& l : lists) {
        Binding b2 = b;
        if (!bind_key(b2, key)) continue;
        b2[lv.name] = Value::list(elem, l);
        inputs(fi + 1, std::move(b2));
      }
    }
    // an empty list leaves the key to be chosen elsewhere
    if (!bound) {
      Binding b2 = b;
      b2[lv.name] = Value::list(elem, {});
      inputs(fi + 1, std::move(b2));
    } else if (b.at(lv.name).as_list().items.empty()) {
      inputs(fi + 1, b);
    }
  }

  // Objects of a type a free variable may take: pool order for synthetics.
  std::vector<Value> object_domain(const std::string& type, size_t slack) {
    std::vector<Value> out;
    size_t limit = 0;
    auto u = used.find(type);
    if (u != used.end()) limit = u->second;
    limit += slack;
    for (const auto& o : pools.universe.of_type(type)) {
      int si = pools.universe.synthetic_index(o);
      if (si >= 0 && static_cast<size_t>(si) >= limit) continue;
      out.push_back(o);
    }
    return out;
  }

  std::vector<Binding> run() {
    inputs(0, {});
    std::set<std::string> nu;
    for (const auto& f : net.outputs[t])
      for (const auto& v : f.insc.entries)
        if (v.kind == VarKind::Nu) nu.insert(v.name);
    auto vars = net.vars(t);
    std::map<std::string, size_t> slack;  // object slots of each type in t
    for (const auto& v : vars) {
      const Type& ty = net.var_type(v);
      if (!ty.is_object()) continue;
      slack[ty.name] += ty.list ? (pools.list_capacity ? pools.list_capacity : pools.universe.objects.size()) : 1;
    }

    std::set<Binding> full;
    for (const auto& b : partial) {
      std::vector<std::string> free;
      for (const auto& v : vars)
        if (!b.count(v)) free.push_back(v);
      std::vector<std::vector<Value>> domains;
      for (const auto& v : free) {
        const Type& ty = net.var_type(v);
        std::vector<Value> dom;
        if (ty.is_object() && ty.list) {
          std::vector<std::vector<Value>> ls;
          auto objs = object_domain(ty.name, slack[ty.name]);
          std::sort(objs.begin(), objs.end());
          sublists(objs, pools.list_capacity, ls);
          for (auto& l : ls) dom.push_back(Value::list(ty.element(), l));
        } else if (ty.is_object()) {
          for (auto& o : object_domain(ty.name, slack[ty.name]))
            if (!nu.count(v) || !occurs(m, o)) dom.push_back(o);
          if (nu.count(v) && dom.empty()) exhausted = true;
        } else {
          auto it = pools.values.find(v);
          if (it != pools.values.end())
            for (const auto& x : it->second)
              if (x.type() == ty) dom.push_back(x);
        }
        domains.push_back(std::move(dom));
      }
      bool empty = false;
      for (const auto& d : domains) empty = empty || d.empty();
      if (empty) continue;
      std::vector<size_t> idx(free.size(), 0);
      while (true) {
        Binding full_b = b;
        for (size_t i = 0; i < free.size(); ++i) full_b[free[i]] = domains[i][idx[i]];
        full.insert(std::move(full_b));
        bool done = true;
        for (size_t i = free.size(); i-- > 0;) {
          if (++idx[i] < domains[i].size()) {
            done = false;
            break;
          }
          idx[i] = 0;
        }
        if (done) break;
      }
    }

    std::vector<Binding> out;
    for (const auto& b : full) {
      if (!synthetic_prefix(b)) continue;
      if (!enabled(net, m, t, b)) continue;
      if (pools.key_functional && !key_functional(fire_unchecked(net, m, t, b))) continue;
      out.push_back(b);
    }
    return out;
  }

  // After the step, the synthetic ids used of each type form a prefix of the pool.
  bool synthetic_prefix(const Binding& b) {
    std::map<std::string, std::set<int>> seen;
    auto note = [&](const Value& v) {
      int i = pools.universe.synthetic_index(v);
      if (i >= 0) seen[v.as_object().type].insert(i);
    };
    for (const auto& [k, v] : b) {
      if (v.is_list())
        for (const auto& x : v.as_list().items) note(x);
      else
        note(v);
    }
    for (auto& [type, idx] : seen) {
      size_t have = 0;
      auto u = used.find(type);
      if (u != used.end()) have = u->second;
      for (size_t i = 0; i < have; ++i) idx.insert(static_cast<int>(i));
      int expect = 0;
      for (int i : idx)
        if (i != expect++) return false;
    }
    return true;
  }
};

}  // namespace

std::vector<Binding> candidate_bindings(const Net& net, const Marking& m, size_t t, const Pools& pools,
                                        const SyntheticUse& used, bool* fresh_exhausted) {
  Generator g{net, m, t, pools, used, false, {}};
  auto out = g.run();
  if (fresh_exhausted && g.exhausted) *fresh_exhausted = true;
  return out;
}

namespace {

struct Enumerator {
  const Net& net;
  const Pools& pools;
  const std::function<bool(const Run&)>& visit;
  EnumerationStats stats;
  std::set<std::tuple<Marking, SyntheticUse, size_t>> dead;
  bool stop = false;
  Run run;

  bool accepting(const Marking& m) {
    for (const auto& f : net.final)
      if (matches(net, m, f)) return true;
    return false;
  }

  // True iff some accepted run extends the current prefix.
  bool dfs(const Marking& m, const SyntheticUse& used, size_t remaining) {
    ++stats.states;
    auto key = std::make_tuple(m, used, remaining);
    if (dead.count(key)) return false;
    bool found = false;
    if (accepting(m)) {
      found = true;
      ++stats.runs;
      if (!visit(run)) {
        stop = true;
        return true;
      }
    }
    if (remaining > 0) {
      for (size_t t = 0; t < net.transitions.size() && !stop; ++t) {
        for (const auto& b : candidate_bindings(net, m, t, pools, used, &stats.fresh_exhausted)) {
          run.push_back({t, b});
          found = dfs(fire_unchecked(net, m, t, b), advance_use(used, pools, b), remaining - 1) || found;
          run.pop_back();
          if (stop) break;
        }
      }
    }
    if (!found && !stop) dead.insert(key);
    return found;
  }
};

}  // namespace

EnumerationStats enumerate_runs(const Net& net, size_t max_len, const Pools& pools,
                                const std::function<bool(const Run&)>& visit) {
  Enumerator e{net, pools, visit, {}, {}, false, {}};
  for (const auto& spec : net.initial) {
    Marking m;
    try {
      m = marking_of(net, spec);
    } catch (const std::invalid_argument&) {
      continue;
    }
    e.dfs(m, {}, max_len);
    if (e.stop) break;
  }
  return e.stats;
}

}  // namespace dopid
