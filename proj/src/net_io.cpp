#include "dopid/net_io.hpp"

#include <functional>

namespace dopid {

namespace {

const std::set<std::string> kTopKeys = {"types", "functions", "variables", "places", "transitions",
                                        "arcs",  "initial",   "final"};

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw DocumentError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw DocumentError(path, "unknown field '" + it.key() + "'");
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw DocumentError(path, "missing field '" + key + "'");
  return j.at(key);
}

std::string require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw DocumentError(path, "expected a string");
  return j.get<std::string>();
}

Type resolve_type(const TypeRegistry& reg, const Json& j, const std::string& path) {
  auto name = require_string(j, path);
  if (auto t = reg.try_resolve(name)) return *t;
  throw DocumentError(path, "unknown type '" + name + "'");
}

MarkingSpec load_spec(const Net& net, const Json& j, const std::string& path) {
  if (!j.is_object()) throw DocumentError(path, "expected an object mapping places to patterns");
  MarkingSpec spec;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string ppath = path + "." + it.key();
    auto p = net.find_place(it.key());
    if (!p) throw DocumentError(ppath, "unknown place '" + it.key() + "'");
    const auto& color = net.places[*p].color;
    PlaceSpec ps;
    const Json& v = it.value();
    if (v.is_string() && v.get<std::string>() == "empty") {
      ps.kind = PlaceSpec::Kind::Empty;
    } else if (v.is_object() && v.size() == 1 && v.contains("exact")) {
      ps.kind = PlaceSpec::Kind::Exact;
      const Json& toks = v["exact"];
      if (!toks.is_array()) throw DocumentError(ppath + ".exact", "expected an array of tokens");
      for (size_t i = 0; i < toks.size(); ++i) {
        std::string tpath = ppath + ".exact[" + std::to_string(i) + "]";
        Json tok = toks[i];
        // single-component tokens may be written without brackets
        if (!tok.is_array()) tok = Json::array({tok});
        if (tok.size() != color.size())
          throw DocumentError(tpath, "token arity " + std::to_string(tok.size()) + " does not match the place color");
        Token t;
        for (size_t c = 0; c < tok.size(); ++c)
          t.push_back(value_from_json(tok[c], color[c], net.registry, tpath + "[" + std::to_string(c) + "]"));
        ps.tokens.push_back(std::move(t));
      }
    } else if (v.is_object() && v.size() == 1 && v.contains("atLeast")) {
      ps.kind = PlaceSpec::Kind::AtLeast;
      if (!v["atLeast"].is_number_integer()) throw DocumentError(ppath + ".atLeast", "expected an integer");
      ps.at_least = v["atLeast"].get<int>();
    } else {
      throw DocumentError(ppath, "expected \"empty\", {\"exact\": [...]} or {\"atLeast\": k}");
    }
    spec.places[it.key()] = std::move(ps);
  }
  return spec;
}

}  // namespace

Net load_model(const Json& doc) {
  check_keys(doc, kTopKeys, "");
  Net net;

  if (doc.contains("types")) {
    const Json& types = doc["types"];
    check_keys(types, {"objects", "finsets"}, "types");
    if (types.contains("objects")) {
      if (!types["objects"].is_array()) throw DocumentError("types.objects", "expected an array");
      for (size_t i = 0; i < types["objects"].size(); ++i) {
        std::string path = "types.objects[" + std::to_string(i) + "]";
        try {
          net.registry.add_object_type(require_string(types["objects"][i], path));
        } catch (const std::invalid_argument& e) {
          throw DocumentError(path, e.what());
        }
      }
    }
    if (types.contains("finsets")) {
      const Json& fs = types["finsets"];
      if (!fs.is_object()) throw DocumentError("types.finsets", "expected an object");
      for (auto it = fs.begin(); it != fs.end(); ++it) {
        std::string path = "types.finsets." + it.key();
        if (!it.value().is_array()) throw DocumentError(path, "expected an array of elements");
        std::vector<std::string> dom;
        for (size_t i = 0; i < it.value().size(); ++i)
          dom.push_back(require_string(it.value()[i], path + "[" + std::to_string(i) + "]"));
        try {
          net.registry.add_finset(it.key(), dom);
        } catch (const std::invalid_argument& e) {
          throw DocumentError(path, e.what());
        }
      }
    }
  }

  if (doc.contains("functions")) {
    const Json& fns = doc["functions"];
    if (!fns.is_object()) throw DocumentError("functions", "expected an object");
    for (auto it = fns.begin(); it != fns.end(); ++it) {
      std::string path = "functions." + it.key();
      check_keys(it.value(), {"args", "result", "table"}, path);
      FunctionSig sig;
      sig.name = it.key();
      const Json& args = require(it.value(), "args", path);
      if (!args.is_array()) throw DocumentError(path + ".args", "expected an array of types");
      for (size_t i = 0; i < args.size(); ++i)
        sig.args.push_back(resolve_type(net.registry, args[i], path + ".args[" + std::to_string(i) + "]"));
      sig.result = resolve_type(net.registry, require(it.value(), "result", path), path + ".result");
      if (it.value().contains("table")) {
        const Json& tab = it.value()["table"];
        if (!tab.is_array()) throw DocumentError(path + ".table", "expected an array of entries");
        std::map<std::vector<Value>, Value> table;
        for (size_t i = 0; i < tab.size(); ++i) {
          std::string epath = path + ".table[" + std::to_string(i) + "]";
          check_keys(tab[i], {"args", "value"}, epath);
          const Json& a = require(tab[i], "args", epath);
          if (!a.is_array() || a.size() != sig.args.size())
            throw DocumentError(epath + ".args", "expected " + std::to_string(sig.args.size()) + " arguments");
          std::vector<Value> key;
          for (size_t k = 0; k < a.size(); ++k)
            key.push_back(value_from_json(a[k], sig.args[k], net.registry, epath + ".args[" + std::to_string(k) + "]"));
          Value v = value_from_json(require(tab[i], "value", epath), sig.result, net.registry, epath + ".value");
          if (!table.emplace(key, v).second) throw DocumentError(epath, "duplicate table entry");
        }
        sig.table = std::move(table);
      }
      try {
        net.registry.add_function(std::move(sig));
      } catch (const std::invalid_argument& e) {
        throw DocumentError(path, e.what());
      }
    }
  }

  if (doc.contains("variables")) {
    const Json& vars = doc["variables"];
    if (!vars.is_object()) throw DocumentError("variables", "expected an object");
    for (auto it = vars.begin(); it != vars.end(); ++it)
      net.variables[it.key()] = resolve_type(net.registry, it.value(), "variables." + it.key());
  }

  const Json& places = require(doc, "places", "");
  if (!places.is_object()) throw DocumentError("places", "expected an object");
  for (auto it = places.begin(); it != places.end(); ++it) {
    std::string path = "places." + it.key();
    if (!it.value().is_array()) throw DocumentError(path, "expected a color array");
    Place p{it.key(), {}};
    for (size_t i = 0; i < it.value().size(); ++i)
      p.color.push_back(resolve_type(net.registry, it.value()[i], path + "[" + std::to_string(i) + "]"));
    net.places.push_back(std::move(p));
  }

  if (doc.contains("transitions")) {
    const Json& ts = doc["transitions"];
    if (!ts.is_array()) throw DocumentError("transitions", "expected an array");
    for (size_t i = 0; i < ts.size(); ++i) {
      std::string path = "transitions[" + std::to_string(i) + "]";
      check_keys(ts[i], {"name", "label", "guard"}, path);
      Transition t;
      t.name = require_string(require(ts[i], "name", path), path + ".name");
      if (net.find_transition(t.name)) throw DocumentError(path + ".name", "duplicate transition '" + t.name + "'");
      if (ts[i].contains("label")) t.label = require_string(ts[i]["label"], path + ".label");
      if (ts[i].contains("guard")) {
        t.guard_text = require_string(ts[i]["guard"], path + ".guard");
        try {
          t.guard = parse_constraint(t.guard_text, net.variables, net.registry);
        } catch (const ParseError& e) {
          throw DocumentError(path + ".guard", e.what());
        }
      }
      net.transitions.push_back(std::move(t));
    }
  }
  net.inputs.assign(net.transitions.size(), {});
  net.outputs.assign(net.transitions.size(), {});

  if (doc.contains("arcs")) {
    const Json& arcs = doc["arcs"];
    if (!arcs.is_array()) throw DocumentError("arcs", "expected an array");
    for (size_t i = 0; i < arcs.size(); ++i) {
      std::string path = "arcs[" + std::to_string(i) + "]";
      check_keys(arcs[i], {"from", "to", "inscription"}, path);
      std::string from = require_string(require(arcs[i], "from", path), path + ".from");
      std::string to = require_string(require(arcs[i], "to", path), path + ".to");
      std::string arc_name = from + " -> " + to;
      Inscription insc;
      const Json& ij = require(arcs[i], "inscription", path);
      if (!ij.is_array() || ij.empty()) throw DocumentError(path + ".inscription", "expected a nonempty array");
      for (size_t k = 0; k < ij.size(); ++k) {
        std::string vpath = path + ".inscription[" + std::to_string(k) + "]";
        check_keys(ij[k], {"var", "kind"}, vpath);
        InscVar v;
        v.name = require_string(require(ij[k], "var", vpath), vpath + ".var");
        if (!net.variables.count(v.name))
          throw DocumentError(vpath + ".var", "arc " + arc_name + " uses undeclared variable '" + v.name + "'");
        if (ij[k].contains("kind")) {
          try {
            v.kind = parse_var_kind(require_string(ij[k]["kind"], vpath + ".kind"));
          } catch (const std::invalid_argument& e) {
            throw DocumentError(vpath + ".kind", e.what());
          }
        }
        insc.entries.push_back(v);
      }
      auto fp = net.find_place(from);
      auto ft = net.find_transition(from);
      auto tp = net.find_place(to);
      auto tt = net.find_transition(to);
      if (fp && tt) {
        if (net.in_flow(*fp, *tt)) throw DocumentError(path, "duplicate arc " + arc_name);
        net.inputs[*tt].push_back({*fp, std::move(insc)});
      } else if (ft && tp) {
        if (net.out_flow(*ft, *tp)) throw DocumentError(path, "duplicate arc " + arc_name);
        net.outputs[*ft].push_back({*tp, std::move(insc)});
      } else {
        throw DocumentError(path, "arc " + arc_name + " must connect a place and a transition");
      }
    }
  }

  for (const char* key : {"initial", "final"}) {
    auto& specs = std::string(key) == "initial" ? net.initial : net.final;
    if (!doc.contains(key)) {
      specs.push_back(MarkingSpec{});
      continue;
    }
    const Json& arr = doc[key];
    if (!arr.is_array()) throw DocumentError(key, "expected an array of marking specifications");
    for (size_t i = 0; i < arr.size(); ++i)
      specs.push_back(load_spec(net, arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return net;
}

Net load_model_text(const std::string& text) { return load_model(parse_json_text(text, "model document")); }

Net load_model_file(const std::string& path) { return load_model_text(read_file(path)); }

Json marking_spec_to_json(const Net& net, const MarkingSpec& spec) {
  (void)net;
  Json out = Json::object();
  for (const auto& [place, ps] : spec.places) {
    switch (ps.kind) {
      case PlaceSpec::Kind::Empty: out[place] = "empty"; break;
      case PlaceSpec::Kind::AtLeast: out[place] = Json{{"atLeast", ps.at_least}}; break;
      case PlaceSpec::Kind::Exact: {
        Json toks = Json::array();
        for (const auto& t : ps.tokens) {
          Json tok = Json::array();
          for (const auto& v : t) tok.push_back(value_to_json(v));
          toks.push_back(tok);
        }
        out[place] = Json{{"exact", toks}};
        break;
      }
    }
  }
  return out;
}

Json serialize(const Net& net) {
  Json doc;
  Json objects = Json::array();
  for (const auto& o : net.registry.object_types()) objects.push_back(o);
  Json finsets = Json::object();
  for (const auto& [name, dom] : net.registry.finsets()) finsets[name] = dom;
  doc["types"] = Json{{"objects", objects}, {"finsets", finsets}};

  Json fns = Json::object();
  for (const auto& [name, sig] : net.registry.functions()) {
    Json f;
    f["args"] = Json::array();
    for (const auto& a : sig.args) f["args"].push_back(a.str());
    f["result"] = sig.result.str();
    if (sig.table) {
      Json tab = Json::array();
      for (const auto& [key, value] : *sig.table) {
        Json args = Json::array();
        for (const auto& k : key) args.push_back(value_to_json(k));
        tab.push_back(Json{{"args", args}, {"value", value_to_json(value)}});
      }
      f["table"] = tab;
    }
    fns[name] = f;
  }
  doc["functions"] = fns;

  Json vars = Json::object();
  for (const auto& [name, t] : net.variables) vars[name] = t.str();
  doc["variables"] = vars;

  Json places = Json::object();
  for (const auto& p : net.places) {
    Json c = Json::array();
    for (const auto& t : p.color) c.push_back(t.str());
    places[p.name] = c;
  }
  doc["places"] = places;

  Json ts = Json::array();
  for (const auto& t : net.transitions) {
    Json tj{{"name", t.name}};
    if (t.label) tj["label"] = *t.label;
    if (!t.guard_text.empty()) tj["guard"] = t.guard_text;
    ts.push_back(tj);
  }
  doc["transitions"] = ts;

  auto insc_json = [](const Inscription& insc) {
    Json arr = Json::array();
    for (const auto& v : insc.entries) arr.push_back(Json{{"var", v.name}, {"kind", var_kind_name(v.kind)}});
    return arr;
  };
  Json arcs = Json::array();
  for (size_t t = 0; t < net.transitions.size(); ++t) {
    for (const auto& f : net.inputs[t])
      arcs.push_back(Json{{"from", net.places[f.place].name}, {"to", net.transitions[t].name},
                          {"inscription", insc_json(f.insc)}});
    for (const auto& f : net.outputs[t])
      arcs.push_back(Json{{"from", net.transitions[t].name}, {"to", net.places[f.place].name},
                          {"inscription", insc_json(f.insc)}});
  }
  doc["arcs"] = arcs;

  Json init = Json::array(), fin = Json::array();
  for (const auto& s : net.initial) init.push_back(marking_spec_to_json(net, s));
  for (const auto& s : net.final) fin.push_back(marking_spec_to_json(net, s));
  doc["initial"] = init;
  doc["final"] = fin;
  return doc;
}

std::vector<std::vector<size_t>> silent_cycles(const Net& net) {
  std::vector<size_t> nodes;
  for (size_t t = 0; t < net.transitions.size(); ++t)
    if (net.transitions[t].silent() && !net.has_nu(t)) nodes.push_back(t);
  std::map<size_t, std::vector<size_t>> succ;
  for (size_t a : nodes) {
    auto post = net.postset(a);
    for (size_t b : nodes) {
      auto pre = net.preset(b);
      for (size_t p : post)
        if (pre.count(p)) {
          succ[a].push_back(b);
          break;
        }
    }
  }
  // one representative cycle per strongly connected component (or self-loop)
  std::vector<std::vector<size_t>> out;
  std::set<size_t> reported;
  for (size_t start : nodes) {
    if (reported.count(start)) continue;
    // DFS for a path back to start
    std::vector<size_t> path{start};
    std::set<size_t> seen{start};
    std::function<bool(size_t)> dfs = [&](size_t u) -> bool {
      for (size_t v : succ[u]) {
        if (v == start) return true;
        if (seen.insert(v).second) {
          path.push_back(v);
          if (dfs(v)) return true;
          path.pop_back();
        }
      }
      return false;
    };
    if (dfs(start)) {
      for (size_t v : path) reported.insert(v);
      out.push_back(path);
    }
  }
  return out;
}

std::vector<Violation> validate_net(const Net& net) {
  std::vector<Violation> out;
  auto add = [&](std::string where, std::string msg) { out.push_back({std::move(where), std::move(msg)}); };

  for (const auto& p : net.places) {
    if (net.find_transition(p.name)) add("places." + p.name, "name is used by both a place and a transition");
    if (p.color.empty()) add("places." + p.name, "color must have at least one component");
    for (const auto& c : p.color)
      if (c.list) add("places." + p.name, "color components cannot be list types");
  }

  for (const auto& [name, t] : net.variables) {
    if (t.list && t.kind != BaseKind::Object)
      add("variables." + name, "list variables must range over object ids, got " + t.str());
  }

  auto check_flow = [&](const Flow& f, size_t t, bool input) {
    const auto& place = net.places[f.place];
    const auto& tr = net.transitions[t];
    std::string where = input ? "arc " + place.name + " -> " + tr.name : "arc " + tr.name + " -> " + place.name;
    int lists = 0;
    for (const auto& v : f.insc.entries) lists += is_list_kind(v.kind) ? 1 : 0;
    if (lists > 1)
      add(where, "inscription " + f.insc.str() + " has more than one list variable (a template inscription has at most one)");
    for (const auto& v : f.insc.entries) {
      const Type& vt = net.var_type(v.name);
      if (is_list_kind(v.kind) && !vt.list)
        add(where, "variable '" + v.name + "' is used as a list but declared " + vt.str());
      if (!is_list_kind(v.kind) && vt.list)
        add(where, "list variable '" + v.name + "' is used without a list kind");
      if (v.kind == VarKind::Nu && !vt.is_object())
        add(where, "nu variable '" + v.name + "' must have an object type");
      if (input && v.kind == VarKind::Nu) add(where, "nu variable '" + v.name + "' in an input flow");
      if (!input && (v.kind == VarKind::ListSubset || v.kind == VarKind::ListExact))
        add(where, "output flow must be simple or transfer-template, found " + std::string(var_kind_name(v.kind)) +
                       " variable '" + v.name + "'");
      if (input && v.kind == VarKind::List)
        add(where, "input flow must be simple/subset/exact template, found transfer variable '" + v.name + "'");
    }
    if (f.insc.entries.size() != place.color.size()) {
      add(where, "inscription " + f.insc.str() + " has arity " + std::to_string(f.insc.entries.size()) +
                     " but place color has " + std::to_string(place.color.size()) + " components");
    } else {
      for (size_t i = 0; i < place.color.size(); ++i) {
        Type et = net.var_type(f.insc.entries[i].name).element();
        if (et != place.color[i])
          add(where, "component " + std::to_string(i + 1) + " of " + f.insc.str() + " has type " + et.str() +
                         " but the place color expects " + place.color[i].str());
      }
    }
  };

  for (size_t t = 0; t < net.transitions.size(); ++t) {
    for (const auto& f : net.inputs[t]) check_flow(f, t, true);
    for (const auto& f : net.outputs[t]) check_flow(f, t, false);
    const auto& tr = net.transitions[t];
    if (tr.guard) {
      auto vs = net.vars(t);
      for (const auto& v : free_variables(*tr.guard))
        if (!vs.count(v))
          add("transitions." + tr.name + ".guard", "guard variable '" + v + "' is not an inscription variable of the transition");
    }
    // nu variables must be pairwise distinct names; an input-bound variable cannot be fresh
    auto in = net.invars(t);
    for (const auto& f : net.outputs[t])
      for (const auto& v : f.insc.entries)
        if (v.kind == VarKind::Nu && in.count(v.name))
          add("transitions." + tr.name, "nu variable '" + v.name + "' is also bound by an input flow");
  }

  auto check_spec = [&](const MarkingSpec& spec, const std::string& where, bool initial) {
    for (const auto& [place, ps] : spec.places) {
      auto p = net.find_place(place);
      if (!p) {
        add(where, "unknown place '" + place + "'");
        continue;
      }
      if (ps.kind == PlaceSpec::Kind::AtLeast) {
        if (ps.at_least < 1) add(where + "." + place, "atLeast requires k >= 1");
        if (initial) add(where + "." + place, "initial markings must be concrete (empty or exact)");
      }
      for (const auto& tok : ps.tokens) {
        bool ok = tok.size() == net.places[*p].color.size();
        for (size_t i = 0; ok && i < tok.size(); ++i) ok = tok[i].type() == net.places[*p].color[i];
        if (!ok) add(where + "." + place, "token " + token_str(tok) + " does not match the place color");
      }
    }
  };
  if (net.initial.empty()) add("initial", "no initial marking");
  if (net.final.empty()) add("final", "no final marking");
  for (size_t i = 0; i < net.initial.size(); ++i) check_spec(net.initial[i], "initial[" + std::to_string(i) + "]", true);
  for (size_t i = 0; i < net.final.size(); ++i) check_spec(net.final[i], "final[" + std::to_string(i) + "]", false);

  for (const auto& cyc : silent_cycles(net)) {
    std::string s;
    for (size_t t : cyc) s += net.transitions[t].name + " -> ";
    s += net.transitions[cyc.front()].name;
    add("transitions", "silent cycle without nu-inscriptions (" + s + "); the run-length bound needs --max-run-len");
  }
  return out;
}

}  // namespace dopid
