#include "dopid/lower.hpp"

#include <fmt/format.h>

namespace dopid {

ValueCoder::ValueCoder(const std::set<std::string>& symbols, const std::vector<std::string>& objects) {
  for (const auto& s : symbols) {
    symbol_names_.push_back(s);
    symbols_.emplace(s, static_cast<int>(symbol_names_.size()));
  }
  for (const auto& o : objects) {
    if (objects_.count(o)) throw std::invalid_argument("duplicate object '" + o + "' in universe");
    object_names_.push_back(o);
    objects_.emplace(o, static_cast<int>(object_names_.size()));
  }
}

int ValueCoder::symbol_code(const std::string& s) const {
  auto it = symbols_.find(s);
  if (it == symbols_.end()) throw std::invalid_argument("symbol \"" + s + "\" outside the value universe");
  return it->second;
}

int ValueCoder::object_code(const std::string& id) const {
  auto it = objects_.find(id);
  if (it == objects_.end()) throw std::invalid_argument("object '" + id + "' outside the object universe");
  return it->second;
}

std::string smt_int(const Integer& i) { return i < 0 ? "(- " + Integer(-i).str() + ")" : i.str(); }

std::string smt_rat(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (num < 0) return "(- (/ " + Integer(-num).str() + " " + den.str() + "))";
  return "(/ " + num.str() + " " + den.str() + ")";
}

std::string ValueCoder::literal(const Value& v) const {
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  if (v.is_int()) return smt_int(v.as_int());
  if (v.is_rat()) return smt_rat(v.as_rat());
  if (v.is_str() || v.is_finset()) return std::to_string(symbol_code(v.symbol()));
  if (v.is_object()) return std::to_string(object_code(v.as_object().id));
  throw std::invalid_argument("list value has no scalar literal");
}

bool ValueCoder::representable(const Value& v) const {
  if (v.is_object()) return has_object(v.as_object().id);
  if (v.is_str() || v.is_finset()) return has_symbol(v.symbol());
  return !v.is_list();
}

const char* smt_sort(const Type& t) {
  if (t.list) throw std::invalid_argument("list types have no solver sort");
  switch (t.kind) {
    case BaseKind::Bool: return "Bool";
    case BaseKind::Rat: return "Real";
    default: return "Int";
  }
}

std::string smt_function_name(const std::string& name) { return "fn_" + name; }

namespace {

std::string conj(const std::vector<std::string>& parts) {
  if (parts.empty()) return "true";
  if (parts.size() == 1) return parts[0];
  std::string out = "(and";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string plus(const std::vector<std::string>& parts, const std::string& zero) {
  if (parts.empty()) return zero;
  if (parts.size() == 1) return parts[0];
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string promote(const std::string& term, const Type& from, const Type& to) {
  if (from.kind == BaseKind::Int && to.kind == BaseKind::Rat) return "(to_real " + term + ")";
  return term;
}

struct Item {
  std::string present;
  std::string value;
};

class Lowerer {
 public:
  Lowerer(const VarMap& vars, const ValueCoder& coder, const TypeRegistry& reg)
      : vars_(vars), coder_(coder), reg_(reg) {}

  std::string root(const Expr& e) {
    std::string t = scalar(e);
    defs_.push_back(t);
    return conj(defs_);
  }

 private:
  std::string scalar(const Expr& e) {
    switch (e.kind) {
      case ExprKind::BoolLit:
      case ExprKind::IntLit:
      case ExprKind::RatLit:
      case ExprKind::StrLit: return coder_.literal(e.literal);
      case ExprKind::Var: {
        auto it = vars_.scalars.find(e.name);
        if (it == vars_.scalars.end()) throw std::invalid_argument("no solver term for variable '" + e.name + "'");
        return it->second;
      }
      case ExprKind::Eq: return "(= " + scalar(*e.args[0]) + " " + scalar(*e.args[1]) + ")";
      case ExprKind::Ge:
      case ExprKind::Gt: {
        const Expr& a = *e.args[0];
        const Expr& b = *e.args[1];
        Type j = (a.type.kind == BaseKind::Rat || b.type.kind == BaseKind::Rat) ? Type::rational() : Type::integer();
        return fmt::format("({} {} {})", e.kind == ExprKind::Ge ? ">=" : ">", promote(scalar(a), a.type, j),
                           promote(scalar(b), b.type, j));
      }
      case ExprKind::And: return "(and " + scalar(*e.args[0]) + " " + scalar(*e.args[1]) + ")";
      case ExprKind::Not: return "(not " + scalar(*e.args[0]) + ")";
      case ExprKind::Add: {
        const Expr& a = *e.args[0];
        const Expr& b = *e.args[1];
        return "(+ " + promote(scalar(a), a.type, e.type) + " " + promote(scalar(b), b.type, e.type) + ")";
      }
      case ExprKind::Neg: return "(- " + scalar(*e.args[0]) + ")";
      case ExprKind::Apply: {
        const FunctionSig& sig = signature(e.name);
        std::vector<std::string> args;
        for (size_t i = 0; i < e.args.size(); ++i)
          args.push_back(promote(scalar(*e.args[i]), e.args[i]->type, sig.args[i]));
        if (sig.table) defs_.push_back(lookup_defined(sig, args));
        return call(sig, args);
      }
      case ExprKind::Agg: return aggregate(e.agg, list(*e.args[0]), e.type);
    }
    throw std::logic_error("bad expression node");
  }

  std::vector<Item> list(const Expr& e) {
    if (e.kind == ExprKind::Var) {
      auto it = vars_.lists.find(e.name);
      if (it == vars_.lists.end()) throw std::invalid_argument("no solver slots for list variable '" + e.name + "'");
      std::vector<Item> out;
      for (const auto& s : it->second) out.push_back({"(not (= " + s + " 0))", s});
      return out;
    }
    if (e.kind != ExprKind::Apply) throw std::logic_error("list term must be a variable or an application");
    const FunctionSig& sig = signature(e.name);
    size_t pos = 0;
    std::vector<std::string> args(e.args.size());
    std::vector<Item> items;
    for (size_t i = 0; i < e.args.size(); ++i) {
      if (e.args[i]->type.list) {
        pos = i;
        items = list(*e.args[i]);
      } else {
        args[i] = promote(scalar(*e.args[i]), e.args[i]->type, sig.args[i]);
      }
    }
    Type elem = e.args[pos]->type.element();
    std::vector<Item> out;
    for (const auto& it : items) {
      auto point = args;
      point[pos] = promote(it.value, elem, sig.args[pos]);
      if (sig.table) defs_.push_back("(=> " + it.present + " " + lookup_defined(sig, point) + ")");
      out.push_back({it.present, call(sig, point)});
    }
    return out;
  }

  std::string aggregate(AggOp op, const std::vector<Item>& items, const Type& t) {
    std::string zero = t.kind == BaseKind::Rat ? "0.0" : "0";
    std::vector<std::string> terms;
    for (const auto& it : items) terms.push_back("(ite " + it.present + " " + it.value + " " + zero + ")");
    if (op == AggOp::Sum) return plus(terms, zero);

    std::vector<std::string> presence;
    for (const auto& it : items) presence.push_back(it.present);
    defs_.push_back(presence.empty() ? "false" : presence.size() == 1 ? presence[0] : "(or " + [&] {
      std::string s;
      for (size_t i = 0; i < presence.size(); ++i) s += (i ? " " : "") + presence[i];
      return s;
    }() + ")");
    if (items.empty()) return zero;

    if (op == AggOp::Mean) {
      std::string sum = plus(terms, zero);
      std::vector<std::string> ones;
      for (const auto& it : items) ones.push_back("(ite " + it.present + " 1 0)");
      std::string cnt = plus(ones, "0");
      std::string name = fresh();
      // division by a literal keeps the term linear
      std::string body = "(/ " + name + "s 1.0)";
      for (size_t c = 2; c <= items.size(); ++c)
        body = fmt::format("(ite (= {}c {}) (/ {}s {}.0) {})", name, c, name, c, body);
      return fmt::format("(let (({}s {}) ({}c {})) {})", name, sum, name, cnt, body);
    }

    // min / max over the present items, folded through let-bound accumulators
    const char* better = op == AggOp::Min ? "<" : ">";
    std::string body;
    std::vector<std::string> opens;
    std::string acc, has;
    for (size_t i = 0; i < items.size(); ++i) {
      std::string a = fresh(), h = fresh();
      std::string def_a, def_h;
      if (i == 0) {
        def_a = "(ite " + items[i].present + " " + items[i].value + " " + zero + ")";
        def_h = items[i].present;
      } else {
        def_a = fmt::format("(ite (and {} (or (not {}) ({} {} {}))) {} {})", items[i].present, has, better,
                            items[i].value, acc, items[i].value, acc);
        def_h = "(or " + has + " " + items[i].present + ")";
      }
      opens.push_back(fmt::format("(let (({} {}) ({} {})) ", a, def_a, h, def_h));
      acc = a;
      has = h;
    }
    std::string out;
    for (const auto& o : opens) out += o;
    out += acc;
    out += std::string(opens.size(), ')');
    return out;
  }

  const FunctionSig& signature(const std::string& name) const {
    const FunctionSig* sig = reg_.function(name);
    if (!sig) throw std::invalid_argument("unknown function '" + name + "'");
    return *sig;
  }

  static std::string call(const FunctionSig& sig, const std::vector<std::string>& args) {
    std::string out = "(" + smt_function_name(sig.name);
    for (const auto& a : args) out += " " + a;
    return out + ")";
  }

  // Disjunction over the table points that exist in the universe.
  std::string lookup_defined(const FunctionSig& sig, const std::vector<std::string>& args) const {
    std::vector<std::string> alts;
    for (const auto& [key, value] : *sig.table) {
      std::vector<std::string> eqs;
      bool representable = true;
      for (size_t i = 0; i < key.size(); ++i) {
        if (!coder_.representable(key[i]) || !coder_.representable(value)) {
          representable = false;
          break;
        }
        eqs.push_back("(= " + args[i] + " " + coder_.literal(key[i]) + ")");
      }
      if (representable) alts.push_back(conj(eqs));
    }
    if (alts.empty()) return "false";
    if (alts.size() == 1) return alts[0];
    std::string out = "(or";
    for (const auto& a : alts) out += " " + a;
    return out + ")";
  }

  std::string fresh() { return "agg!" + std::to_string(++counter_); }

  const VarMap& vars_;
  const ValueCoder& coder_;
  const TypeRegistry& reg_;
  std::vector<std::string> defs_;
  int counter_ = 0;
};

}  // namespace

std::string lower_to_smt(const Expr& e, const VarMap& vars, const ValueCoder& coder, const TypeRegistry& reg) {
  return Lowerer(vars, coder, reg).root(e);
}

std::vector<std::string> function_declarations(const TypeRegistry& reg, const ValueCoder& coder) {
  std::vector<std::string> out;
  for (const auto& [name, sig] : reg.functions()) {
    std::string decl = "(declare-fun " + smt_function_name(name) + " (";
    for (size_t i = 0; i < sig.args.size(); ++i) decl += (i ? " " : "") + std::string(smt_sort(sig.args[i]));
    decl += ") " + std::string(smt_sort(sig.result)) + ")";
    out.push_back(decl);
    if (!sig.table) continue;
    for (const auto& [key, value] : *sig.table) {
      bool representable = coder.representable(value);
      for (const auto& k : key) representable = representable && coder.representable(k);
      if (!representable) continue;
      std::string app = "(" + smt_function_name(name);
      for (const auto& k : key) app += " " + coder.literal(k);
      app += ")";
      out.push_back("(assert (= " + app + " " + coder.literal(value) + "))");
    }
  }
  return out;
}

}  // namespace dopid
