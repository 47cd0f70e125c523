#include "generators.hpp"

#include "dopid/eval.hpp"
#include "dopid/lower.hpp"

namespace dopid::testing {

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<size_t>(0, xs.size() - 1)(rng)];
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

FunctionSig table_fn(std::string name, std::vector<Type> args, Type result,
                     std::map<std::vector<Value>, Value> table) {
  return {std::move(name), std::move(args), std::move(result), std::move(table)};
}

Value obj(const std::string& id) { return Value::object(id, "a"); }
Value col(const std::string& e) { return Value::finset("col", e); }
Value num(int v) { return Value::integer(v); }
Value rat(int n, int d) { return Value::rational(Rational(n, d)); }

struct GuardGen {
  std::mt19937_64& rng;
  const GuardWorld& w;

  const FunctionSig& fn(const char* name) { return *w.registry.function(name); }
  ExprPtr var(const std::string& n) { return build::var(n, w.env.at(n)); }

  ExprPtr object() { return var(coin(rng, 0.5) ? "x" : "y"); }
  ExprPtr str() {
    if (coin(rng, 0.5)) return build::str_lit(pick(rng, w.strings), Type::string());
    return var(coin(rng, 0.5) ? "s" : "t");
  }
  // A literal alone does not name its domain in the concrete syntax.
  ExprPtr color(bool literal = true) {
    switch (uniform(rng, literal ? 0 : 1, 2)) {
      case 0: return build::str_lit(pick(rng, std::vector<std::string>{"red", "green", "blue"}), Type::finset("col"));
      case 1: return var("f");
      default: return build::apply(fn("c"), {object()});
    }
  }
  ExprPtr integer(int d) {
    int k = d <= 0 ? uniform(rng, 0, 1) : uniform(rng, 0, 8);
    switch (k) {
      case 0: return build::int_lit(uniform(rng, -3, 3));
      case 1: return var(coin(rng, 0.5) ? "i" : "j");
      case 2: return build::add(integer(d - 1), integer(d - 1));
      case 3: return build::minus(integer(d - 1));
      case 4: return build::apply(fn("w"), {object()});
      case 5: return build::apply(fn("h"), {integer(d - 1)});
      case 6: return build::apply(fn("k"), {color()});
      case 7: return build::apply(fn("tag"), {str()});
      default: {
        AggOp op = pick(rng, std::vector<AggOp>{AggOp::Sum, AggOp::Min, AggOp::Max});
        return build::aggregate(op, build::apply(fn("w"), {var("X")}));
      }
    }
  }
  ExprPtr rational(int d) {
    int k = d <= 0 ? uniform(rng, 0, 1) : uniform(rng, 0, 5);
    switch (k) {
      case 0: return build::rat_lit(Rational(uniform(rng, -4, 4), uniform(rng, 1, 3)));
      case 1: return var("q");
      case 2: return build::add(coin(rng, 0.5) ? integer(d - 1) : rational(d - 1), rational(d - 1));
      case 3: return build::minus(rational(d - 1));
      case 4: return build::apply(fn("r"), {object()});
      default: {
        AggOp op = pick(rng, std::vector<AggOp>{AggOp::Sum, AggOp::Min, AggOp::Max, AggOp::Mean});
        return build::aggregate(op, build::apply(fn("r"), {var("X")}));
      }
    }
  }
  ExprPtr numeric(int d) { return coin(rng, 0.6) ? integer(d) : rational(d); }
  ExprPtr boolean(int d) {
    int k = d <= 0 ? uniform(rng, 0, 1) : uniform(rng, 0, 8);
    switch (k) {
      case 0: return build::bool_lit(coin(rng, 0.5));
      case 1: return var("bo");
      case 2: return build::eq(str(), str());
      case 3: {
        auto a = color(false), b = color();
        return coin(rng, 0.5) ? build::eq(a, b) : build::eq(b, a);
      }
      case 4: return build::eq(object(), object());
      case 5: return build::ge(numeric(d - 1), numeric(d - 1));
      case 6: return build::gt(numeric(d - 1), numeric(d - 1));
      case 7: return build::conj(boolean(d - 1), boolean(d - 1));
      default: return build::neg_c(boolean(d - 1));
    }
  }
};

}  // namespace

GuardWorld guard_world() {
  GuardWorld w;
  w.objects = {"a1", "a2", "a3"};
  w.strings = {"u", "v", "w"};
  auto& reg = w.registry;
  reg.add_object_type("a");
  reg.add_finset("col", {"red", "green", "blue"});
  Type a = Type::object("a"), col_t = Type::finset("col");
  // w and h are partial: a3, and ints outside 0..2, are undefined
  reg.add_function(table_fn("w", {a}, Type::integer(), {{{obj("a1")}, num(2)}, {{obj("a2")}, num(-1)}}));
  reg.add_function(table_fn("r", {a}, Type::rational(),
                            {{{obj("a1")}, rat(1, 2)}, {{obj("a2")}, rat(3, 1)}, {{obj("a3")}, rat(-5, 4)}}));
  reg.add_function(table_fn("c", {a}, col_t,
                            {{{obj("a1")}, col("red")}, {{obj("a2")}, col("blue")}, {{obj("a3")}, col("red")}}));
  reg.add_function(table_fn("h", {Type::integer()}, Type::integer(),
                            {{{num(0)}, num(1)}, {{num(1)}, num(3)}, {{num(2)}, num(-2)}}));
  reg.add_function(table_fn("k", {col_t}, Type::integer(),
                            {{{col("red")}, num(1)}, {{col("green")}, num(0)}, {{col("blue")}, num(5)}}));
  reg.add_function(table_fn("tag", {Type::string()}, Type::integer(),
                            {{{Value::string("u")}, num(1)}, {{Value::string("v")}, num(2)}}));
  w.env = {{"i", Type::integer()}, {"j", Type::integer()}, {"q", Type::rational()},
           {"s", Type::string()},  {"t", Type::string()},  {"f", col_t},
           {"x", a},               {"y", a},               {"X", a.as_list()},
           {"bo", Type::boolean()}};
  return w;
}

GuardCase random_guard(std::mt19937_64& rng, const GuardWorld& w, int depth) {
  GuardGen g{rng, w};
  GuardCase c;
  c.expr = g.boolean(depth);
  auto& b = c.binding;
  b["i"] = num(uniform(rng, -2, 3));
  b["j"] = num(uniform(rng, -2, 3));
  b["q"] = rat(uniform(rng, -4, 4), uniform(rng, 1, 3));
  b["s"] = Value::string(pick(rng, w.strings));
  b["t"] = Value::string(pick(rng, w.strings));
  b["f"] = col(pick(rng, std::vector<std::string>{"red", "green", "blue"}));
  b["x"] = obj(pick(rng, w.objects));
  b["y"] = obj(pick(rng, w.objects));
  auto ids = w.objects;
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(uniform(rng, 0, 3));
  std::vector<Value> items;
  for (const auto& id : ids) items.push_back(obj(id));
  b["X"] = Value::list(Type::object("a"), items);
  b["bo"] = Value::boolean(coin(rng, 0.5));
  return c;
}

bool evaluate_strict(const Expr& e, const Binding& b, const TypeRegistry& reg) {
  try {
    return evaluate(e, b, reg);
  } catch (const EvalError&) {
    return false;
  }
}

ValueCoder guard_coder(const GuardWorld& w) {
  std::set<std::string> symbols{w.strings.begin(), w.strings.end()};
  symbols.insert({"red", "green", "blue", "#other"});
  return ValueCoder(symbols, w.objects);
}

std::string guard_prelude(const GuardWorld& w) {
  std::string text = "(set-logic QF_UFLIRA)\n";
  for (const auto& l : function_declarations(w.registry, guard_coder(w))) text += l + "\n";
  return text;
}

std::string guard_query(const GuardWorld& w, const GuardCase& c, std::mt19937_64& rng) {
  ValueCoder coder = guard_coder(w);
  std::string text;
  VarMap vm;
  for (const auto& [name, v] : c.binding) {
    if (v.is_list()) {
      auto items = v.as_list().items;
      int pad = uniform(rng, 0, 2);
      auto& slots = vm.lists[name];
      for (size_t k = 0; k < items.size() + pad; ++k) {
        std::string slot = "v_" + name + "_" + std::to_string(k);
        text += "(declare-fun " + slot + " () Int)\n";
        text += "(assert (= " + slot + " " + (k < items.size() ? coder.literal(items[k]) : "0") + "))\n";
        slots.push_back(slot);
      }
      continue;
    }
    std::string cst = "v_" + name;
    text += "(declare-fun " + cst + " () " + smt_sort(v.type()) + ")\n";
    text += "(assert (= " + cst + " " + coder.literal(v) + "))\n";
    vm.scalars[name] = cst;
  }
  text += "(assert " + lower_to_smt(*c.expr, vm, coder, w.registry) + ")\n";
  return text;
}

// ---------------------------------------------------------------------------

namespace {

struct NetGen {
  std::mt19937_64& rng;
  bool two_types = false;
  std::vector<std::pair<std::string, Json>> places;  // name, color
  Json arcs = Json::array();
  Json transitions = Json::array();

  std::vector<Json> colors() {
    std::vector<Json> cs{Json::array({"a"}), Json::array({"a", "int"}), Json::array({"a", "a"}),
                         Json::array({"a", "string"})};
    if (two_types) {
      cs.push_back(Json::array({"b"}));
      cs.push_back(Json::array({"a", "b"}));
    }
    return cs;
  }

  static const char* scalar_var(const std::string& type, int nth) {
    if (type == "a") return nth == 0 ? "x" : "y";
    if (type == "b") return "z";
    if (type == "int") return "d";
    return "s";
  }

  Json input_insc(const Json& color, std::set<std::string>& bound) {
    Json insc = Json::array();
    bool list_used = false;
    int a_seen = 0;
    for (const auto& c : color) {
      std::string type = c.get<std::string>();
      if ((type == "a" || type == "b") && !list_used && coin(rng, 0.25)) {
        list_used = true;
        std::string v = type == "a" ? "X" : "Z";
        insc.push_back({{"var", v}, {"kind", coin(rng, 0.5) ? "subset" : "exact"}});
        bound.insert(v);
        continue;
      }
      std::string v = scalar_var(type, type == "a" ? a_seen++ : 0);
      insc.push_back({{"var", v}});
      bound.insert(v);
    }
    return insc;
  }

  Json output_insc(const Json& color, const std::set<std::string>& bound) {
    Json insc = Json::array();
    bool list_used = false;
    int a_seen = 0;
    for (const auto& c : color) {
      std::string type = c.get<std::string>();
      if (type == "a" || type == "b") {
        std::string lst = type == "a" ? "X" : "Z";
        std::string nu = type == "a" ? "n" : "nz";
        if (!list_used && bound.count(lst) && coin(rng, 0.5)) {
          list_used = true;
          insc.push_back({{"var", lst}, {"kind", "list"}});
          continue;
        }
        std::string v = scalar_var(type, type == "a" ? a_seen++ : 0);
        if (!bound.count(v) && coin(rng, 0.6)) {
          insc.push_back({{"var", nu}, {"kind", "nu"}});
          continue;
        }
        if (coin(rng, 0.15)) {
          insc.push_back({{"var", nu}, {"kind", "nu"}});
          continue;
        }
        insc.push_back({{"var", v}});
        continue;
      }
      insc.push_back({{"var", scalar_var(type, 0)}});
    }
    return insc;
  }

  std::optional<std::string> guard(const std::set<std::string>& vars) {
    std::vector<std::string> options;
    if (vars.count("d")) {
      options.push_back("d > 0");
      options.push_back("d <= 1");
      options.push_back("d + d >= 2");
    }
    if (vars.count("s")) {
      options.push_back("s == \"u\"");
      options.push_back("s != \"v\"");
    }
    if (vars.count("d") && vars.count("s")) options.push_back("d >= 1 || s == \"u\"");
    if (options.empty() || !coin(rng, 0.4)) return std::nullopt;
    return pick(rng, options);
  }
};

}  // namespace

std::optional<Instance> random_instance(std::mt19937_64& rng) {
  NetGen g{rng};
  g.two_types = coin(rng, 0.3);
  Json model;
  model["types"] = {{"objects", g.two_types ? Json::array({"a", "b"}) : Json::array({"a"})}};
  Json vars = {{"x", "a"}, {"y", "a"}, {"X", "[a]"}, {"n", "a"}, {"d", "int"}, {"s", "string"}};
  if (g.two_types) {
    vars["z"] = "b";
    vars["Z"] = "[b]";
    vars["nz"] = "b";
  }
  model["variables"] = vars;

  int np = uniform(rng, 2, 4);
  auto colors = g.colors();
  Json places = Json::object();
  for (int i = 0; i < np; ++i) {
    Json c = pick(rng, colors);
    g.places.emplace_back("p" + std::to_string(i), c);
    places["p" + std::to_string(i)] = c;
  }
  model["places"] = places;

  int nt = uniform(rng, 2, 5);
  std::vector<std::string> labels;
  for (int t = 0; t < nt; ++t) {
    std::string name = "t" + std::to_string(t);
    Json tr = {{"name", name}};
    if (!coin(rng, 0.25)) {
      std::string l = pick(rng, std::vector<std::string>{"A", "B", "C"});
      tr["label"] = l;
      labels.push_back(l);
    }
    std::vector<size_t> idx(np);
    for (int i = 0; i < np; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    int nin = uniform(rng, 0, std::min(2, np));
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<size_t> ins(idx.begin(), idx.begin() + nin);
    std::shuffle(idx.begin(), idx.end(), rng);
    int nout = uniform(rng, nin == 0 ? 1 : 0, std::min(2, np));
    std::vector<size_t> outs(idx.begin(), idx.begin() + nout);
    std::set<std::string> bound, used;
    for (size_t p : ins) {
      Json insc = g.input_insc(g.places[p].second, bound);
      g.arcs.push_back({{"from", g.places[p].first}, {"to", name}, {"inscription", insc}});
    }
    used = bound;
    for (size_t p : outs) {
      Json insc = g.output_insc(g.places[p].second, bound);
      for (const auto& v : insc) used.insert(v["var"].get<std::string>());
      g.arcs.push_back({{"from", name}, {"to", g.places[p].first}, {"inscription", insc}});
    }
    if (auto gd = g.guard(used)) tr["guard"] = *gd;
    g.transitions.push_back(tr);
  }
  model["transitions"] = g.transitions;
  model["arcs"] = g.arcs;

  // log objects
  std::vector<std::pair<std::string, std::string>> objects{{"o1", "a"}};
  if (coin(rng, 0.6)) objects.emplace_back("o2", "a");
  if (g.two_types) objects.emplace_back("b1", "b");

  Json init = Json::object();
  if (coin(rng, 0.4)) {
    for (const auto& [pname, color] : g.places) {
      if (color == Json::array({"a"})) {
        init[pname] = {{"exact", Json::array({Json::array({"o1"})})}};
        break;
      }
      if (color == Json::array({"a", "int"})) {
        init[pname] = {{"exact", Json::array({Json::array({"o1", uniform(rng, 0, 2)})})}};
        break;
      }
    }
  }
  model["initial"] = Json::array({init});
  Json fin = Json::object();
  if (coin(rng, 0.7)) fin[pick(rng, g.places).first] = {{"atLeast", 1}};
  Json finals = Json::array({fin});
  if (coin(rng, 0.2)) finals.push_back(Json::object());
  model["final"] = finals;

  Json log_doc;
  Json objs = Json::object();
  for (const auto& [id, type] : objects) objs[id] = type;
  log_doc["objects"] = objs;
  Json events = Json::array();
  int ne = uniform(rng, 1, 3);
  for (int e = 0; e < ne; ++e) {
    std::string act = (!labels.empty() && coin(rng, 0.85)) ? pick(rng, labels) : "Z";
    std::vector<std::string> ids;
    for (const auto& [id, type] : objects) ids.push_back(id);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(uniform(rng, 1, std::min<int>(2, ids.size())));
    std::sort(ids.begin(), ids.end());
    Json ev = {{"id", "e" + std::to_string(e)}, {"activity", act}, {"objects", ids}, {"time", e + 1}};
    Json vmap = Json::object();
    if (coin(rng, 0.5)) vmap["d"] = uniform(rng, 0, 2);
    if (coin(rng, 0.3)) vmap["s"] = coin(rng, 0.5) ? "u" : "v";
    if (!vmap.empty()) ev["vmap"] = vmap;
    events.push_back(ev);
  }
  log_doc["events"] = events;

  Instance inst;
  try {
    inst.net = load_model(model);
    inst.log = load_log(log_doc);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!validate_net(inst.net).empty()) return std::nullopt;
  inst.model = std::move(model);
  inst.log_doc = std::move(log_doc);
  inst.max_len = static_cast<size_t>(uniform(rng, 3, 6));
  return inst;
}

}  // namespace dopid::testing
