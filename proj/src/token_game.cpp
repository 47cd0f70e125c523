#include "dopid/token_game.hpp"

namespace dopid {

Marking empty_marking(const Net& net) { return Marking(net.places.size()); }

Marking marking_of(const Net& net, const MarkingSpec& spec) {
  Marking m = empty_marking(net);
  for (const auto& [place, ps] : spec.places) {
    if (ps.kind == PlaceSpec::Kind::AtLeast)
      throw std::invalid_argument("marking specification for '" + place + "' is not concrete");
    size_t p = net.place_index(place);
    for (const auto& t : ps.tokens) m[p].insert(t);
  }
  return m;
}

bool matches(const Net& net, const Marking& m, const MarkingSpec& spec) {
  for (size_t p = 0; p < net.places.size(); ++p) {
    auto it = spec.places.find(net.places[p].name);
    if (it == spec.places.end() || it->second.kind == PlaceSpec::Kind::Empty) {
      if (!m[p].empty()) return false;
      continue;
    }
    const auto& ps = it->second;
    if (ps.kind == PlaceSpec::Kind::AtLeast) {
      if (static_cast<int>(m[p].size()) < ps.at_least) return false;
    } else {
      std::set<Token> want(ps.tokens.begin(), ps.tokens.end());
      if (want != m[p]) return false;
    }
  }
  return true;
}

std::string marking_str(const Net& net, const Marking& m) {
  std::string out = "{";
  bool first = true;
  for (size_t p = 0; p < net.places.size(); ++p) {
    if (m[p].empty()) continue;
    if (!first) out += "; ";
    first = false;
    out += net.places[p].name + ":";
    bool ft = true;
    for (const auto& t : m[p]) {
      out += (ft ? "" : ",") + token_str(t);
      ft = false;
    }
  }
  return out + "}";
}

Json marking_to_json(const Net& net, const Marking& m) {
  Json out = Json::object();
  for (size_t p = 0; p < net.places.size(); ++p) {
    if (m[p].empty()) continue;
    Json toks = Json::array();
    for (const auto& t : m[p]) {
      Json tok = Json::array();
      for (const auto& v : t) tok.push_back(value_to_json(v));
      toks.push_back(tok);
    }
    out[net.places[p].name] = toks;
  }
  return out;
}

std::set<Token> instantiate_inscription(const Net& net, const Inscription& insc, const Binding& b) {
  (void)net;
  Token base;
  int pos = insc.list_position();
  for (const auto& v : insc.entries) {
    auto it = b.find(v.name);
    if (it == b.end()) throw std::invalid_argument("variable '" + v.name + "' of " + insc.str() + " is unbound");
    base.push_back(it->second);
  }
  if (pos < 0) return {base};
  std::set<Token> out;
  for (const auto& item : base[pos].as_list().items) {
    Token t = base;
    t[pos] = item;
    out.insert(std::move(t));
  }
  return out;
}

const char* reason_name(Reason r) {
  switch (r) {
    case Reason::BadBinding: return "bad-binding";
    case Reason::NotFresh: return "not-fresh";
    case Reason::NotContained: return "not-enabled";
    case Reason::GuardFalse: return "guard-false";
    case Reason::GuardUndefined: return "guard-undefined";
    case Reason::Maximality: return "maximality";
    case Reason::FinalMismatch: return "final-mismatch";
  }
  return "?";
}

bool EnableReport::has(Reason r) const {
  for (const auto& f : findings)
    if (f.reason == r) return true;
  return false;
}

namespace {

bool occurs(const Marking& m, const Value& obj) {
  for (const auto& place : m)
    for (const auto& tok : place)
      for (const auto& v : tok)
        if (v == obj) return true;
  return false;
}

std::string tokens_str(const std::vector<Token>& ts) {
  std::string out;
  for (const auto& t : ts) out += (out.empty() ? "" : ", ") + token_str(t);
  return out;
}

}  // namespace

std::vector<Finding> check_binding(const Net& net, const Marking& m, size_t t, const Binding& b) {
  std::vector<Finding> out;
  auto vars = net.vars(t);
  for (const auto& v : vars) {
    auto it = b.find(v);
    if (it == b.end()) {
      out.push_back({Reason::BadBinding, "variable '" + v + "' is unbound"});
      continue;
    }
    const Type& want = net.var_type(v);
    if (it->second.type() != want) {
      out.push_back({Reason::BadBinding, "variable '" + v + "' bound to " + it->second.str() + " of type " +
                                             it->second.type().str() + ", expected " + want.str()});
      continue;
    }
    if (it->second.is_list()) {
      std::set<Value> seen;
      for (const auto& x : it->second.as_list().items)
        if (!seen.insert(x).second)
          out.push_back({Reason::BadBinding, "list '" + v + "' contains " + x.str() + " twice"});
    }
  }
  for (const auto& [name, value] : b)
    if (!vars.count(name))
      out.push_back({Reason::BadBinding, "'" + name + "' is not a variable of " + net.transitions[t].name});
  if (!out.empty()) return out;

  std::map<Value, std::string> nu_values;
  for (const auto& f : net.outputs[t]) {
    for (const auto& v : f.insc.entries) {
      if (v.kind != VarKind::Nu) continue;
      const Value& x = b.at(v.name);
      auto [it, fresh] = nu_values.emplace(x, v.name);
      if (!fresh && it->second != v.name)
        out.push_back({Reason::NotFresh, "nu variables '" + it->second + "' and '" + v.name + "' share " + x.str()});
      if (fresh && occurs(m, x))
        out.push_back({Reason::NotFresh, "nu variable '" + v.name + "' bound to " + x.str() + " which occurs in the marking"});
    }
  }
  return out;
}

bool guard_holds(const Net& net, size_t t, const Binding& b, const GuardOracle* oracle, std::string* why) {
  const auto& tr = net.transitions[t];
  if (!tr.guard) return true;
  try {
    return evaluate(*tr.guard, b, net.registry);
  } catch (const EvalError& e) {
    if (oracle && uses_uninterpreted(*tr.guard, net.registry)) return (*oracle)(net, t, b);
    if (why) *why = e.what();
    return false;
  }
}

EnableReport check_enabled(const Net& net, const Marking& m, size_t t, const Binding& b, const GuardOracle* oracle) {
  EnableReport rep;
  rep.findings = check_binding(net, m, t, b);
  for (const auto& f : rep.findings)
    if (f.reason == Reason::BadBinding) return rep;

  for (const auto& f : net.inputs[t]) {
    const auto& place = m[f.place];
    auto toks = instantiate_inscription(net, f.insc, b);
    std::vector<Token> missing;
    for (const auto& tok : toks)
      if (!place.count(tok)) missing.push_back(tok);
    if (!missing.empty())
      rep.findings.push_back({Reason::NotContained, net.places[f.place].name + " lacks " + tokens_str(missing)});
    if (f.insc.template_class() != TemplateClass::ExactTemplate) continue;
    // every token agreeing with the binding on the non-list slots must be taken
    int pos = f.insc.list_position();
    std::vector<Token> left;
    for (const auto& tok : place) {
      bool key = true;
      for (size_t i = 0; key && i < tok.size(); ++i)
        if (static_cast<int>(i) != pos && !(tok[i] == b.at(f.insc.entries[i].name))) key = false;
      if (key && !toks.count(tok)) left.push_back(tok);
    }
    if (!left.empty())
      rep.findings.push_back({Reason::Maximality, f.insc.str() + " on " + net.places[f.place].name +
                                                      " leaves matching " + tokens_str(left)});
  }

  const auto& tr = net.transitions[t];
  if (tr.guard) {
    std::string why;
    if (!guard_holds(net, t, b, oracle, &why)) {
      if (why.empty())
        rep.findings.push_back({Reason::GuardFalse, "guard [" + tr.guard_text + "] is false"});
      else
        rep.findings.push_back({Reason::GuardUndefined, "guard [" + tr.guard_text + "] is undefined: " + why});
    }
  }
  return rep;
}

bool enabled(const Net& net, const Marking& m, size_t t, const Binding& b, const GuardOracle* oracle) {
  return check_enabled(net, m, t, b, oracle).enabled();
}

Marking fire_unchecked(const Net& net, const Marking& m, size_t t, const Binding& b) {
  Marking out = m;
  auto pre = net.preset(t);
  auto post = net.postset(t);
  for (const auto& f : net.inputs[t]) {
    if (post.count(f.place)) continue;
    for (const auto& tok : instantiate_inscription(net, f.insc, b)) out[f.place].erase(tok);
  }
  for (const auto& f : net.outputs[t]) {
    if (pre.count(f.place)) continue;
    for (auto& tok : instantiate_inscription(net, f.insc, b)) out[f.place].insert(std::move(tok));
  }
  return out;
}

Marking fire(const Net& net, const Marking& m, size_t t, const Binding& b, const GuardOracle* oracle) {
  auto rep = check_enabled(net, m, t, b, oracle);
  if (!rep.enabled()) {
    std::string s;
    for (const auto& f : rep.findings) s += std::string(" [") + reason_name(f.reason) + "] " + f.detail;
    throw std::logic_error(net.transitions[t].name + " is not enabled:" + s);
  }
  return fire_unchecked(net, m, t, b);
}

ReplayOutcome replay_from(const Net& net, const Run& run, const Marking& start, const GuardOracle* oracle) {
  ReplayOutcome out;
  Marking m = start;
  for (size_t i = 0; i < run.size(); ++i) {
    auto rep = check_enabled(net, m, run[i].transition, run[i].binding, oracle);
    if (!rep.enabled()) {
      out.step = i;
      out.findings = rep.findings;
      out.final_marking = m;
      return out;
    }
    m = fire_unchecked(net, m, run[i].transition, run[i].binding);
  }
  out.step = run.size();
  out.final_marking = m;
  for (size_t f = 0; f < net.final.size(); ++f) {
    if (matches(net, m, net.final[f])) {
      out.accepted = true;
      out.final_spec = static_cast<int>(f);
      return out;
    }
  }
  out.findings.push_back({Reason::FinalMismatch, "marking " + marking_str(net, m) + " matches no final specification"});
  return out;
}

ReplayOutcome replay(const Net& net, const Run& run, const GuardOracle* oracle) {
  ReplayOutcome best;
  bool have = false;
  for (size_t i = 0; i < net.initial.size(); ++i) {
    Marking start;
    try {
      start = marking_of(net, net.initial[i]);
    } catch (const std::invalid_argument&) {
      continue;
    }
    auto out = replay_from(net, run, start, oracle);
    out.initial_spec = static_cast<int>(i);
    if (out.accepted) return out;
    if (!have || out.step > best.step) best = out;
    have = true;
  }
  if (!have) best.findings.push_back({Reason::FinalMismatch, "no concrete initial marking"});
  return best;
}

Run load_run(const Net& net, const Json& doc) {
  if (!doc.is_array()) throw DocumentError("", "a run document is an array of steps");
  Run run;
  for (size_t i = 0; i < doc.size(); ++i) {
    std::string path = "[" + std::to_string(i) + "]";
    const Json& s = doc[i];
    if (!s.is_object() || !s.contains("transition") || !s["transition"].is_string())
      throw DocumentError(path, "expected {\"transition\": name, \"binding\": {...}}");
    for (auto it = s.begin(); it != s.end(); ++it)
      if (it.key() != "transition" && it.key() != "binding") throw DocumentError(path, "unknown field '" + it.key() + "'");
    auto t = net.find_transition(s["transition"].get<std::string>());
    if (!t) throw DocumentError(path + ".transition", "unknown transition '" + s["transition"].get<std::string>() + "'");
    Step step{*t, {}};
    if (s.contains("binding")) {
      if (!s["binding"].is_object()) throw DocumentError(path + ".binding", "expected an object");
      for (auto it = s["binding"].begin(); it != s["binding"].end(); ++it) {
        std::string vpath = path + ".binding." + it.key();
        auto vt = net.variables.find(it.key());
        if (vt == net.variables.end()) throw DocumentError(vpath, "undeclared variable '" + it.key() + "'");
        step.binding[it.key()] = value_from_json(it.value(), vt->second, net.registry, vpath);
      }
    }
    run.push_back(std::move(step));
  }
  return run;
}

Json run_to_json(const Net& net, const Run& run) {
  Json arr = Json::array();
  for (const auto& s : run) {
    Json b = Json::object();
    for (const auto& [k, v] : s.binding) b[k] = value_to_json(v);
    arr.push_back(Json{{"transition", net.transitions[s.transition].name}, {"binding", b}});
  }
  return arr;
}

Json replay_to_json(const Net& net, const Run& run, const ReplayOutcome& out) {
  Json j;
  j["outcome"] = out.accepted ? "accepted" : "rejected";
  j["steps"] = run.size();
  if (!out.accepted) {
    j["step"] = out.step;
    if (out.step < run.size()) j["transition"] = net.transitions[run[out.step].transition].name;
    Json fs = Json::array();
    for (const auto& f : out.findings) fs.push_back(Json{{"reason", reason_name(f.reason)}, {"detail", f.detail}});
    j["findings"] = fs;
  } else {
    j["final_spec"] = out.final_spec;
  }
  j["initial_spec"] = out.initial_spec;
  j["marking"] = marking_to_json(net, out.final_marking);
  return j;
}

std::set<std::string> step_objects(const Net& net, const Step& s) {
  (void)net;
  std::set<std::string> out;
  for (const auto& [k, v] : s.binding) {
    if (v.is_object()) out.insert(v.as_object().id);
    if (v.is_list())
      for (const auto& x : v.as_list().items)
        if (x.is_object()) out.insert(x.as_object().id);
  }
  return out;
}

std::map<std::string, Value> step_data(const Net& net, const Step& s) {
  std::map<std::string, Value> out;
  for (const auto& [k, v] : s.binding)
    if (net.var_type(k).is_data()) out.emplace(k, v);
  return out;
}

}  // namespace dopid
