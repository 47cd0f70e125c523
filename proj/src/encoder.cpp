#include "dopid/encoder.hpp"

#include "dopid/alignment.hpp"

#include <algorithm>
#include <sstream>

namespace dopid {

std::string SmtProblem::T(size_t j) { return "T_" + std::to_string(j); }
std::string SmtProblem::O(size_t j, size_t k) { return "O_" + std::to_string(j) + "_" + std::to_string(k); }
std::string SmtProblem::D(size_t j, const std::string& x) const {
  auto it = std::find(data_vars.begin(), data_vars.end(), x);
  if (it == data_vars.end()) throw std::invalid_argument("no data variable '" + x + "'");
  return "D_" + std::to_string(j) + "_" + std::to_string(it - data_vars.begin());
}
std::string SmtProblem::pm(size_t j) { return "pm_" + std::to_string(j); }
std::string SmtProblem::pe(size_t i, size_t j) { return "pe_" + std::to_string(i) + "_" + std::to_string(j); }
std::string SmtProblem::delta(size_t i, size_t j) { return "delta_" + std::to_string(i) + "_" + std::to_string(j); }

namespace {

std::string join(const std::string& op, const std::vector<std::string>& v, const std::string& unit) {
  if (v.empty()) return unit;
  if (v.size() == 1) return v[0];
  std::string s = "(" + op;
  for (const auto& x : v) s += " " + x;
  return s + ")";
}
std::string all(const std::vector<std::string>& v) { return join("and", v, "true"); }
std::string any(const std::vector<std::string>& v) { return join("or", v, "false"); }
std::string sum(const std::vector<std::string>& v) { return join("+", v, "0"); }
std::string eq(const std::string& a, const std::string& b) { return "(= " + a + " " + b + ")"; }
std::string neq(const std::string& a, const std::string& b) { return "(distinct " + a + " " + b + ")"; }
std::string imp(const std::string& a, const std::string& b) { return "(=> " + a + " " + b + ")"; }
std::string ite(const std::string& c, const std::string& a, const std::string& b) {
  return "(ite " + c + " " + a + " " + b + ")";
}
std::string neg(const std::string& a) { return "(not " + a + ")"; }
std::string num(long long v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

void guard_literals(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::StrLit) out.insert(e.literal.symbol());
  for (const auto& a : e.args) guard_literals(*a, out);
}

void value_symbols(const Value& v, std::set<std::string>& out) {
  if (v.is_str() || v.is_finset()) out.insert(v.symbol());
  if (v.is_list())
    for (const auto& x : v.as_list().items) value_symbols(x, out);
}

struct PlaceInfo {
  std::vector<size_t> obj_pos;             // color positions holding objects
  std::vector<size_t> data_pos;            // color positions holding data
  std::vector<std::vector<Value>> keys;    // object tuples over the universe
  std::map<std::vector<Value>, size_t> key_index;
};

struct Encoder {
  const Net& net;
  const EventLog& log;
  const TraceGraph& tg;
  const Bounds& b;
  const EncodeOptions& opts;
  SmtProblem P;
  std::vector<PlaceInfo> places;
  std::vector<const Event*> events;
  std::map<std::string, std::pair<int, int>> type_range;  // object type -> code range

  std::string M(size_t j, size_t p, size_t k) const {
    return "M_" + std::to_string(j) + "_" + std::to_string(p) + "_" + std::to_string(k);
  }
  std::string S(size_t j, size_t p, size_t k, size_t l) const {
    return "S_" + std::to_string(j) + "_" + std::to_string(p) + "_" + std::to_string(k) + "_" + std::to_string(l);
  }
  std::string U(size_t j, const std::string& type, size_t i) const {
    if (j == 0) return "false";
    size_t ti = std::distance(b.universe.synthetic.begin(), b.universe.synthetic.find(type));
    return "U_" + std::to_string(j) + "_" + std::to_string(ti) + "_" + std::to_string(i);
  }
  std::string code(const Value& o) const { return std::to_string(b.universe.code(o)); }
  std::string Tl(size_t j, size_t t) const { return eq(SmtProblem::T(j), std::to_string(t + 1)); }

  void declare(const std::string& name, const std::string& sort) { P.decls.push_back({name, sort}); }
  std::vector<std::string>& section(const std::string& name) {
    for (auto& s : P.sections)
      if (s.name == name) return s.assertions;
    P.sections.push_back({name, {}});
    return P.sections.back().assertions;
  }
  void assert_(const std::string& sec, const std::string& term) { section(sec).push_back("(assert " + term + ")"); }

  void setup() {
    P.n = b.n;
    P.L = net.transitions.size();
    P.universe = b.universe;
    events = trace_sequence(log, tg);
    P.m = events.size();
    for (const auto* e : events) {
      P.events.push_back(e->id);
      P.log_penalties.push_back(static_cast<long long>(log_penalty(*e)));
      P.log_total += P.log_penalties.back();
    }

    std::set<std::string> symbols{kOtherSymbol};
    for (const auto* e : events)
      for (const auto& [k, v] : e->attrs) value_symbols(v, symbols);
    for (const auto& t : net.transitions)
      if (t.guard) guard_literals(*t.guard, symbols);
    for (const auto& [name, sig] : net.registry.functions())
      if (sig.table)
        for (const auto& [key, v] : *sig.table) {
          for (const auto& x : key) value_symbols(x, symbols);
          value_symbols(v, symbols);
        }
    for (const auto* specs : {&net.initial, &net.final})
      for (const auto& spec : *specs)
        for (const auto& [pl, ps] : spec.places)
          for (const auto& tok : ps.tokens)
            for (const auto& v : tok) value_symbols(v, symbols);
    for (const auto& [name, dom] : net.registry.finsets())
      for (const auto& e : dom) symbols.insert(e);
    if (opts.value_domains)
      for (const auto& [x, vals] : *opts.value_domains)
        for (const auto& v : vals) value_symbols(v, symbols);
    std::vector<std::string> ids;
    for (const auto& o : b.universe.objects) ids.push_back(o.as_object().id);
    P.coder = ValueCoder(symbols, ids);

    for (size_t i = 0; i < b.universe.objects.size(); ++i) {
      const auto& type = b.universe.objects[i].as_object().type;
      auto [it, fresh] = type_range.emplace(type, std::make_pair(int(i) + 1, int(i) + 1));
      if (!fresh) it->second.second = int(i) + 1;
    }

    for (const auto& [name, type] : net.variables)
      if (type.is_data() && !type.list) P.data_vars.push_back(name);

    size_t K = b.max_event_objects;
    for (size_t t = 0; t < P.L; ++t) {
      SlotLayout lay;
      auto vars = net.vars(t);
      for (const auto& v : vars) {
        const Type& ty = net.var_type(v);
        if (ty.is_object() && !ty.list) lay.scalars[v] = ++lay.size;
      }
      for (const auto& v : vars) {
        const Type& ty = net.var_type(v);
        if (!ty.is_object() || !ty.list) continue;
        auto& slots = lay.lists[v];
        for (size_t c = 0; c < b.capacity; ++c) slots.push_back(++lay.size);
      }
      K = std::max(K, lay.size);
      P.layouts.push_back(std::move(lay));
    }
    P.K = K;

    // a synchronous move must be able to carry every object of an event
    for (const auto* e : events) {
      std::map<std::string, size_t> per_type;
      for (const auto& o : e->objects) ++per_type[log.objects.at(o)];
      for (size_t t = 0; t < P.L; ++t) {
        if (net.transitions[t].label != e->activity) continue;
        const auto& lay = P.layouts[t];
        for (const auto& [type, count] : per_type) {
          size_t slots = 0;
          bool has_list = false;
          for (const auto& [v, s] : lay.scalars) slots += net.var_type(v).name == type;
          for (const auto& [v, s] : lay.lists)
            if (net.var_type(v).name == type) {
              slots += s.size();
              has_list = true;
            }
          if (has_list && slots < count)
            throw EncodeError("list capacity " + std::to_string(b.capacity) + " of transition '" +
                              net.transitions[t].name + "' cannot hold the " + std::to_string(count) + " " + type +
                              " objects of event '" + e->id + "'");
        }
      }
    }

    for (const auto& pl : net.places) {
      PlaceInfo info;
      for (size_t i = 0; i < pl.color.size(); ++i)
        (pl.color[i].is_object() ? info.obj_pos : info.data_pos).push_back(i);
      info.keys.push_back({});
      for (size_t i : info.obj_pos) {
        std::vector<std::vector<Value>> next;
        auto objs = b.universe.of_type(pl.color[i].name);
        for (const auto& k : info.keys)
          for (const auto& o : objs) {
            auto k2 = k;
            k2.push_back(o);
            next.push_back(std::move(k2));
          }
        info.keys = std::move(next);
      }
      for (size_t k = 0; k < info.keys.size(); ++k) info.key_index[info.keys[k]] = k;
      places.push_back(std::move(info));
    }

    bool real = false;
    for (const auto& [name, type] : net.variables) real = real || type.kind == BaseKind::Rat;
    for (const auto& pl : net.places)
      for (const auto& ty : pl.color) real = real || ty.kind == BaseKind::Rat;
    for (const auto& [name, sig] : net.registry.functions()) {
      real = real || sig.result.kind == BaseKind::Rat;
      for (const auto& a : sig.args) real = real || a.kind == BaseKind::Rat;
    }
    for (const auto& t : net.transitions)
      if (t.guard && t.guard_text.find('/') != std::string::npos) real = true;
    bool uf = !net.registry.functions().empty();
    P.logic = std::string("QF_") + (uf ? "UF" : "") + (real ? "LIRA" : "LIA");
    P.preamble = function_declarations(net.registry, P.coder);

    long long max_data = 0;
    for (size_t t = 0; t < P.L; ++t) max_data = std::max<long long>(max_data, net.data_vars(t).size());
    P.sentinel = P.log_total + static_cast<long long>(P.n) * (static_cast<long long>(P.K) + max_data) + 1;
  }

  const Type& data_type(const std::string& x) const { return net.var_type(x); }

  void declarations() {
    for (size_t j = 1; j <= P.n; ++j) declare(SmtProblem::T(j), "Int");
    for (size_t j = 1; j <= P.n; ++j)
      for (size_t k = 1; k <= P.K; ++k) declare(SmtProblem::O(j, k), "Int");
    for (size_t j = 1; j <= P.n; ++j)
      for (const auto& x : P.data_vars) declare(P.D(j, x), smt_sort(data_type(x)));
    for (size_t j = 0; j <= P.n; ++j)
      for (size_t p = 0; p < places.size(); ++p)
        for (size_t k = 0; k < places[p].keys.size(); ++k) {
          declare(M(j, p, k), "Bool");
          for (size_t l = 0; l < places[p].data_pos.size(); ++l)
            declare(S(j, p, k, l), smt_sort(net.places[p].color[places[p].data_pos[l]]));
        }
    for (size_t j = 1; j <= P.n; ++j)
      for (const auto& [type, pool] : b.universe.synthetic)
        for (size_t i = 0; i < pool.size(); ++i) declare(U(j, type, i), "Bool");
    for (size_t j = 1; j <= P.n; ++j) declare(SmtProblem::pm(j), "Int");
    for (size_t i = 1; i <= P.m; ++i)
      for (size_t j = 1; j <= P.n; ++j) declare(SmtProblem::pe(i, j), "Int");
    for (size_t i = 0; i <= P.m; ++i)
      for (size_t j = 0; j <= P.n; ++j) declare(SmtProblem::delta(i, j), "Int");
    declare("len", "Int");
  }

  // Solver term of an inscription entry at step j (objects: scalar slot).
  std::string entry_term(size_t j, size_t t, const InscVar& v) const {
    const Type& ty = net.var_type(v.name);
    if (ty.is_object()) return SmtProblem::O(j, P.layouts[t].scalars.at(v.name));
    return P.D(j, v.name);
  }

  // Object part of consumed/produced: the token key agrees with the binding.
  std::string key_match(size_t j, size_t t, size_t p, const Inscription& insc, const std::vector<Value>& key,
                        bool with_list) const {
    std::vector<std::string> parts;
    const auto& info = places[p];
    for (size_t ki = 0; ki < info.obj_pos.size(); ++ki) {
      const auto& v = insc.entries[info.obj_pos[ki]];
      if (is_list_kind(v.kind)) {
        if (!with_list) continue;
        std::vector<std::string> alts;
        for (size_t s : P.layouts[t].lists.at(v.name)) alts.push_back(eq(SmtProblem::O(j, s), code(key[ki])));
        parts.push_back(any(alts));
      } else {
        parts.push_back(eq(entry_term(j, t, v), code(key[ki])));
      }
    }
    return all(parts);
  }

  // Data components of token key k at time js equal the step's data variables.
  std::vector<std::string> data_match(size_t js, size_t j, size_t t, size_t p, size_t k, const Inscription& insc) const {
    std::vector<std::string> parts;
    const auto& info = places[p];
    for (size_t l = 0; l < info.data_pos.size(); ++l)
      parts.push_back(eq(S(js, p, k, l), entry_term(j, t, insc.entries[info.data_pos[l]])));
    return parts;
  }

  void initial() {
    std::vector<std::string> alts;
    for (const auto& spec : net.initial) {
      std::vector<std::string> parts;
      bool ok = true;
      for (size_t p = 0; p < places.size(); ++p) {
        std::map<size_t, const Token*> present;
        auto it = spec.places.find(net.places[p].name);
        if (it != spec.places.end()) {
          if (it->second.kind == PlaceSpec::Kind::AtLeast) ok = false;
          for (const auto& tok : it->second.tokens) {
            std::vector<Value> key;
            for (size_t i : places[p].obj_pos) key.push_back(tok[i]);
            auto ki = places[p].key_index.find(key);
            if (ki == places[p].key_index.end()) throw EncodeError("initial token outside the object universe");
            if (present.count(ki->second))
              throw EncodeError("initial marking holds two tokens with one object key in " + net.places[p].name);
            present[ki->second] = &tok;
          }
        }
        for (size_t k = 0; k < places[p].keys.size(); ++k) {
          auto pi = present.find(k);
          if (pi == present.end()) {
            parts.push_back(neg(M(0, p, k)));
            continue;
          }
          parts.push_back(M(0, p, k));
          for (size_t l = 0; l < places[p].data_pos.size(); ++l)
            parts.push_back(eq(S(0, p, k, l), P.coder.literal((*pi->second)[places[p].data_pos[l]])));
        }
      }
      if (ok) alts.push_back(all(parts));
    }
    assert_("init", any(alts));
  }

  void final() {
    std::vector<std::string> alts;
    const size_t n = P.n;
    for (const auto& spec : net.final) {
      std::vector<std::string> parts;
      for (size_t p = 0; p < places.size(); ++p) {
        auto it = spec.places.find(net.places[p].name);
        const auto& info = places[p];
        if (it == spec.places.end() || it->second.kind == PlaceSpec::Kind::Empty) {
          for (size_t k = 0; k < info.keys.size(); ++k) parts.push_back(neg(M(n, p, k)));
        } else if (it->second.kind == PlaceSpec::Kind::AtLeast) {
          std::vector<std::string> cnt;
          for (size_t k = 0; k < info.keys.size(); ++k) cnt.push_back(ite(M(n, p, k), "1", "0"));
          parts.push_back("(>= " + sum(cnt) + " " + std::to_string(it->second.at_least) + ")");
        } else {
          std::map<size_t, std::vector<const Token*>> present;
          for (const auto& tok : it->second.tokens) {
            std::vector<Value> key;
            for (size_t i : info.obj_pos) key.push_back(tok[i]);
            auto ki = info.key_index.find(key);
            if (ki == info.key_index.end()) {
              parts.push_back("false");
              continue;
            }
            present[ki->second].push_back(&tok);
          }
          for (size_t k = 0; k < info.keys.size(); ++k) {
            auto pi = present.find(k);
            if (pi == present.end()) {
              parts.push_back(neg(M(n, p, k)));
              continue;
            }
            if (pi->second.size() > 1) {
              parts.push_back("false");  // not representable with functional keys
              continue;
            }
            parts.push_back(M(n, p, k));
            for (size_t l = 0; l < info.data_pos.size(); ++l)
              parts.push_back(eq(S(n, p, k, l), P.coder.literal((*pi->second[0])[info.data_pos[l]])));
          }
        }
      }
      alts.push_back(all(parts));
    }
    assert_("final", any(alts));
  }

  std::string slots_zero(size_t j, size_t from) const {
    std::vector<std::string> z;
    for (size_t k = from; k <= P.K; ++k) z.push_back(eq(SmtProblem::O(j, k), "0"));
    return all(z);
  }

  std::string in_range(const std::string& term, const std::string& type) const {
    auto it = type_range.find(type);
    if (it == type_range.end()) return "false";
    return "(and (<= " + std::to_string(it->second.first) + " " + term + ") (<= " + term + " " +
           std::to_string(it->second.second) + "))";
  }

  // Data variables of t that no simple input inscription determines.
  std::set<std::string> undetermined_data(size_t t) const {
    std::set<std::string> det;
    for (const auto& f : net.inputs[t])
      if (f.insc.list_position() < 0)
        for (const auto& v : f.insc.entries) det.insert(v.name);
    std::set<std::string> out;
    for (const auto& x : net.data_vars(t))
      if (!det.count(x)) out.insert(x);
    return out;
  }

  void types() {
    const size_t n = P.n;
    for (size_t j = 1; j <= n; ++j) {
      assert_("type", "(and (<= 0 " + SmtProblem::T(j) + ") (<= " + SmtProblem::T(j) + " " + std::to_string(P.L) + "))");
      if (j < n) assert_("type", imp(eq(SmtProblem::T(j), "0"), eq(SmtProblem::T(j + 1), "0")));
      assert_("type", imp(eq(SmtProblem::T(j), "0"), slots_zero(j, 1)));
      for (size_t t = 0; t < P.L; ++t) {
        const auto& lay = P.layouts[t];
        std::vector<std::string> parts;
        for (const auto& [v, s] : lay.scalars) parts.push_back(in_range(SmtProblem::O(j, s), net.var_type(v).name));
        for (const auto& [v, slots] : lay.lists) {
          const auto& type = net.var_type(v).name;
          for (size_t i = 0; i < slots.size(); ++i) {
            std::string o = SmtProblem::O(j, slots[i]);
            parts.push_back("(or " + eq(o, "0") + " " + in_range(o, type) + ")");
            if (i + 1 < slots.size()) {
              std::string o2 = SmtProblem::O(j, slots[i + 1]);
              parts.push_back(imp(neq(o2, "0"), "(and " + neq(o, "0") + " (> " + o2 + " " + o + "))"));
            }
          }
        }
        if (lay.size < P.K) parts.push_back(slots_zero(j, lay.size + 1));
        if (opts.value_domains) {
          for (const auto& x : undetermined_data(t)) {
            std::vector<std::string> alts;
            auto it = opts.value_domains->find(x);
            if (it != opts.value_domains->end())
              for (const auto& v : it->second)
                if (v.type() == data_type(x) && P.coder.representable(v)) alts.push_back(eq(P.D(j, x), P.coder.literal(v)));
            // a template with a nonempty list takes the value from its tokens
            for (const auto& f : net.inputs[t]) {
              int lp = f.insc.list_position();
              if (lp < 0) continue;
              bool has = false;
              for (const auto& v : f.insc.entries) has = has || v.name == x;
              if (has) alts.push_back(neq(SmtProblem::O(j, lay.lists.at(f.insc.entries[lp].name).at(0)), "0"));
            }
            parts.push_back(any(alts));
          }
        }
        assert_("type", imp(Tl(j, t), all(parts)));
      }
      for (const auto& x : P.data_vars) {
        const Type& ty = data_type(x);
        if (ty.kind == BaseKind::String) {
          assert_("type", "(and (<= 1 " + P.D(j, x) + ") (<= " + P.D(j, x) + " " +
                              std::to_string(P.coder.symbol_count()) + "))");
        } else if (ty.kind == BaseKind::FinSet) {
          std::vector<std::string> alts;
          for (const auto& e : net.registry.finset_domain(ty.name))
            alts.push_back(eq(P.D(j, x), std::to_string(P.coder.symbol_code(e))));
          assert_("type", any(alts));
        }
      }
    }
    // stored data of string / finset sort stays within the codes
    for (size_t j = 0; j <= n; ++j)
      for (size_t p = 0; p < places.size(); ++p)
        for (size_t l = 0; l < places[p].data_pos.size(); ++l) {
          const Type& ty = net.places[p].color[places[p].data_pos[l]];
          if (ty.kind != BaseKind::String && ty.kind != BaseKind::FinSet) continue;
          for (size_t k = 0; k < places[p].keys.size(); ++k) {
            std::string s = S(j, p, k, l);
            if (ty.kind == BaseKind::String) {
              assert_("type", "(and (<= 1 " + s + ") (<= " + s + " " + std::to_string(P.coder.symbol_count()) + "))");
            } else {
              std::vector<std::string> alts;
              for (const auto& e : net.registry.finset_domain(ty.name))
                alts.push_back(eq(s, std::to_string(P.coder.symbol_code(e))));
              assert_("type", any(alts));
            }
          }
        }
  }

  void fresh() {
    for (size_t j = 1; j <= P.n; ++j) {
      for (size_t t = 0; t < P.L; ++t) {
        std::vector<std::string> nus;
        for (const auto& f : net.outputs[t])
          for (const auto& v : f.insc.entries)
            if (v.kind == VarKind::Nu && std::find(nus.begin(), nus.end(), v.name) == nus.end()) nus.push_back(v.name);
        for (size_t a = 0; a < nus.size(); ++a)
          for (size_t c = a + 1; c < nus.size(); ++c)
            assert_("fresh", imp(Tl(j, t), neq(entry_term(j, t, {nus[a], VarKind::Nu}),
                                                entry_term(j, t, {nus[c], VarKind::Nu}))));
        for (const auto& v : nus) {
          std::string slot = SmtProblem::O(j, P.layouts[t].scalars.at(v));
          for (const auto& o : b.universe.of_type(net.var_type(v).name)) {
            std::vector<std::string> occ;
            for (size_t p = 0; p < places.size(); ++p)
              for (size_t k = 0; k < places[p].keys.size(); ++k)
                if (std::find(places[p].keys[k].begin(), places[p].keys[k].end(), o) != places[p].keys[k].end())
                  occ.push_back(M(j - 1, p, k));
            if (occ.empty()) continue;
            assert_("fresh", imp("(and " + Tl(j, t) + " " + eq(slot, code(o)) + ")", neg(any(occ))));
          }
        }
      }
      // synthetic ids are used in pool order
      for (const auto& [type, pool] : b.universe.synthetic) {
        for (size_t i = 0; i < pool.size(); ++i) {
          std::vector<std::string> use{U(j - 1, type, i)};
          for (size_t k = 1; k <= P.K; ++k) use.push_back(eq(SmtProblem::O(j, k), code(pool[i])));
          assert_("fresh", eq(U(j, type, i), any(use)));
          if (i > 0) assert_("fresh", imp(U(j, type, i), U(j, type, i - 1)));
        }
      }
    }
  }

  void moves() {
    for (size_t j = 1; j <= P.n; ++j) {
      for (size_t t = 0; t < P.L; ++t) {
        auto pre = net.preset(t);
        auto post = net.postset(t);
        std::vector<std::string> parts;
        for (const auto& f : net.inputs[t]) {
          size_t p = f.place;
          const auto& info = places[p];
          for (size_t k = 0; k < info.keys.size(); ++k) {
            std::vector<std::string> body{M(j - 1, p, k)};
            for (auto& d : data_match(j - 1, j, t, p, k, f.insc)) body.push_back(d);
            if (!post.count(p)) body.push_back(neg(M(j, p, k)));
            parts.push_back(imp(key_match(j, t, p, f.insc, info.keys[k], true), all(body)));
          }
          if (f.insc.template_class() == TemplateClass::ExactTemplate) {
            // every token agreeing with the binding on the non-list slots is taken
            std::vector<std::string> cnt;
            for (size_t k = 0; k < info.keys.size(); ++k) {
              std::vector<std::string> c{M(j - 1, p, k), key_match(j, t, p, f.insc, info.keys[k], false)};
              for (auto& d : data_match(j - 1, j, t, p, k, f.insc)) c.push_back(d);
              cnt.push_back(ite(all(c), "1", "0"));
            }
            std::vector<std::string> used;
            for (size_t s : P.layouts[t].lists.at(f.insc.entries[f.insc.list_position()].name))
              used.push_back(ite(neq(SmtProblem::O(j, s), "0"), "1", "0"));
            parts.push_back(eq(sum(cnt), sum(used)));
          }
        }
        for (const auto& f : net.outputs[t]) {
          size_t p = f.place;
          if (pre.count(p)) continue;  // places in both pre- and postset keep their tokens
          const auto& info = places[p];
          for (size_t k = 0; k < info.keys.size(); ++k) {
            std::vector<std::string> body{M(j, p, k)};
            for (auto& d : data_match(j, j, t, p, k, f.insc)) body.push_back(d);
            parts.push_back(imp(key_match(j, t, p, f.insc, info.keys[k], true), all(body)));
          }
        }
        if (!parts.empty()) assert_("move", imp(Tl(j, t), all(parts)));
      }
    }
  }

  void remain() {
    for (size_t j = 1; j <= P.n; ++j) {
      for (size_t p = 0; p < places.size(); ++p) {
        const auto& info = places[p];
        for (size_t k = 0; k < info.keys.size(); ++k) {
          std::vector<std::string> alts{eq(M(j - 1, p, k), M(j, p, k))};
          for (size_t t = 0; t < P.L; ++t) {
            auto pre = net.preset(t);
            auto post = net.postset(t);
            if (pre.count(p) && !post.count(p)) {
              const Inscription* in = net.in_flow(p, t);
              alts.push_back("(and " + Tl(j, t) + " " + key_match(j, t, p, *in, info.keys[k], true) + ")");
            } else if (post.count(p) && !pre.count(p)) {
              const Inscription* out = net.out_flow(t, p);
              alts.push_back("(and " + Tl(j, t) + " " + key_match(j, t, p, *out, info.keys[k], true) + ")");
            }
          }
          assert_("rem", any(alts));
          for (size_t l = 0; l < info.data_pos.size(); ++l)
            assert_("rem", imp("(and " + M(j - 1, p, k) + " " + M(j, p, k) + ")", eq(S(j, p, k, l), S(j - 1, p, k, l))));
        }
      }
    }
  }

  VarMap var_map(size_t j, size_t t) const {
    VarMap vm;
    for (const auto& v : net.vars(t)) {
      const Type& ty = net.var_type(v);
      if (ty.is_object() && ty.list) {
        for (size_t s : P.layouts[t].lists.at(v)) vm.lists[v].push_back(SmtProblem::O(j, s));
      } else if (ty.is_object()) {
        vm.scalars[v] = SmtProblem::O(j, P.layouts[t].scalars.at(v));
      } else {
        vm.scalars[v] = P.D(j, v);
      }
    }
    return vm;
  }

  void guards() {
    for (size_t j = 1; j <= P.n; ++j)
      for (size_t t = 0; t < P.L; ++t) {
        const auto& tr = net.transitions[t];
        if (!tr.guard) continue;
        assert_("guard", imp(Tl(j, t), lower_to_smt(*tr.guard, var_map(j, t), P.coder, net.registry)));
      }
  }

  // Number of data mismatches between event e and a step of t at j.
  std::string mismatch(const Event& e, size_t j, size_t t) const {
    std::set<std::string> names;
    for (const auto& [k, v] : e.attrs) names.insert(k);
    auto dv = net.data_vars(t);
    for (const auto& x : dv) names.insert(x);
    std::vector<std::string> terms;
    long long fixed = 0;
    for (const auto& x : names) {
      auto a = e.attrs.find(x);
      bool model = std::find(dv.begin(), dv.end(), x) != dv.end();
      if (a == e.attrs.end() || !model) {
        ++fixed;
        continue;
      }
      auto lit = coerce_value(a->second, data_type(x), net.registry);
      if (!lit || !P.coder.representable(*lit)) {
        ++fixed;
        continue;
      }
      terms.push_back(ite(eq(P.D(j, x), P.coder.literal(*lit)), "0", "1"));
    }
    if (fixed) terms.push_back(num(fixed));
    return sum(terms);
  }

  void penalties() {
    for (size_t j = 1; j <= P.n; ++j) {
      // distinct nonzero slots
      std::vector<std::string> cnt;
      for (size_t k = 1; k <= P.K; ++k) {
        std::vector<std::string> c{neq(SmtProblem::O(j, k), "0")};
        for (size_t k2 = 1; k2 < k; ++k2) c.push_back(neq(SmtProblem::O(j, k), SmtProblem::O(j, k2)));
        cnt.push_back(ite(all(c), "1", "0"));
      }
      std::vector<std::string> silent{eq(SmtProblem::T(j), "0")};
      std::string ndata = "0";
      for (size_t t = P.L; t-- > 0;) {
        if (net.transitions[t].silent()) {
          silent.push_back(Tl(j, t));
          continue;
        }
        auto nd = net.data_vars(t).size();
        if (nd) ndata = ite(Tl(j, t), std::to_string(nd), ndata);
      }
      assert_("penalty", eq(SmtProblem::pm(j), ite(any(silent), "0", sum({sum(cnt), ndata}))));

      for (size_t i = 1; i <= P.m; ++i) {
        const Event& e = *events[i - 1];
        std::vector<std::string> same;
        for (size_t k = 1; k <= P.K; ++k) {
          std::vector<std::string> alts{eq(SmtProblem::O(j, k), "0")};
          for (const auto& o : e.objects)
            alts.push_back(eq(SmtProblem::O(j, k), std::to_string(P.coder.object_code(o))));
          same.push_back(any(alts));
        }
        for (const auto& o : e.objects) {
          std::vector<std::string> alts;
          for (size_t k = 1; k <= P.K; ++k) alts.push_back(eq(SmtProblem::O(j, k), std::to_string(P.coder.object_code(o))));
          same.push_back(any(alts));
        }
        std::string objs_equal = all(same);
        std::string term = std::to_string(P.sentinel);
        for (size_t t = P.L; t-- > 0;) {
          if (net.transitions[t].label != e.activity) continue;
          term = ite("(and " + Tl(j, t) + " " + objs_equal + ")", mismatch(e, j, t), term);
        }
        assert_("penalty", eq(SmtProblem::pe(i, j), term));
      }
    }
  }

  void distance() {
    using S_ = SmtProblem;
    assert_("delta", eq(S_::delta(0, 0), "0"));
    for (size_t i = 1; i <= P.m; ++i)
      assert_("delta", eq(S_::delta(i, 0), "(+ " + num(P.log_penalties[i - 1]) + " " + S_::delta(i - 1, 0) + ")"));
    for (size_t j = 1; j <= P.n; ++j)
      assert_("delta", eq(S_::delta(0, j), "(+ " + S_::pm(j) + " " + S_::delta(0, j - 1) + ")"));
    for (size_t i = 1; i <= P.m; ++i)
      for (size_t j = 1; j <= P.n; ++j) {
        std::string d = S_::delta(i, j);
        std::string a = "(+ " + num(P.log_penalties[i - 1]) + " " + S_::delta(i - 1, j) + ")";
        std::string bm = "(+ " + S_::pm(j) + " " + S_::delta(i, j - 1) + ")";
        std::string c = "(+ " + S_::pe(i, j) + " " + S_::delta(i - 1, j - 1) + ")";
        assert_("delta", "(and (<= " + d + " " + a + ") (<= " + d + " " + bm + ") (<= " + d + " " + c + ") (or " +
                             eq(d, a) + " " + eq(d, bm) + " " + eq(d, c) + "))");
      }
    std::vector<std::string> len;
    for (size_t j = 1; j <= P.n; ++j) len.push_back(ite(neq(S_::T(j), "0"), "1", "0"));
    assert_("delta", eq("len", sum(len)));
  }
};

}  // namespace

SmtProblem encode(const Net& net, const EventLog& log, const TraceGraph& tg, const Bounds& bounds,
                  const EncodeOptions& opts) {
  Encoder e{net, log, tg, bounds, opts, {}, {}, {}, {}};
  e.setup();
  e.declarations();
  e.initial();
  e.final();
  e.moves();
  e.remain();
  e.types();
  e.fresh();
  e.guards();
  e.penalties();
  e.distance();
  return std::move(e.P);
}

std::string emit(const SmtProblem& p, bool check) {
  std::ostringstream out;
  out << "(set-option :produce-models true)\n";
  out << "(set-logic " << p.logic << ")\n";
  for (const auto& l : p.preamble) out << l << "\n";
  for (const auto& d : p.decls) out << "(declare-fun " << d.name << " () " << d.sort << ")\n";
  for (const auto& s : p.sections) {
    out << "; " << s.name << "\n";
    for (const auto& a : s.assertions) out << a << "\n";
  }
  if (check) out << "(check-sat)\n";
  return out.str();
}

}  // namespace dopid
