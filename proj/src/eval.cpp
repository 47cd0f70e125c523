#include "dopid/eval.hpp"

namespace dopid {

namespace {

Value make_numeric(const Type& t, const Rational& r) {
  if (t.kind == BaseKind::Int) {
    if (boost::multiprecision::denominator(r) != 1) throw EvalError("non-integral result for an int term");
    return Value::integer(boost::multiprecision::numerator(r));
  }
  return Value::rational(r);
}

Value coerce(const Value& v, const Type& to) {
  if (to == Type::rational() && v.is_int()) return Value::rational(Rational(v.as_int()));
  return v;
}

Value apply_table(const FunctionSig& sig, const std::vector<Value>& args) {
  if (!sig.table) throw EvalError("function '" + sig.name + "' has no interpretation");
  auto it = sig.table->find(args);
  if (it == sig.table->end()) {
    std::string s;
    for (const auto& a : args) s += (s.empty() ? "" : ",") + a.str();
    throw EvalError("no interpretation for " + sig.name + "(" + s + ")");
  }
  return it->second;
}

}  // namespace

Value aggregate(AggOp op, const std::vector<Value>& values) {
  if (values.empty()) {
    if (op == AggOp::Sum) return Value::integer(0);
    throw EvalError(std::string(agg_name(op)) + " of an empty list");
  }
  bool rat = false;
  for (const auto& v : values) {
    if (!v.is_numeric()) throw EvalError("aggregate over non-numeric value " + v.str());
    rat = rat || v.is_rat();
  }
  if (op == AggOp::Mean && !rat) throw EvalError("mean is only defined over rationals");
  Type t = rat ? Type::rational() : Type::integer();
  Rational acc = values[0].numeric();
  for (size_t i = 1; i < values.size(); ++i) {
    Rational x = values[i].numeric();
    switch (op) {
      case AggOp::Sum:
      case AggOp::Mean: acc += x; break;
      case AggOp::Min: if (x < acc) acc = x; break;
      case AggOp::Max: if (x > acc) acc = x; break;
    }
  }
  if (op == AggOp::Mean) acc /= Rational(static_cast<long>(values.size()));
  return make_numeric(t, acc);
}

Value evaluate_term(const Expr& e, const Binding& b, const TypeRegistry& reg) {
  switch (e.kind) {
    case ExprKind::BoolLit:
    case ExprKind::IntLit:
    case ExprKind::RatLit:
    case ExprKind::StrLit: return e.literal;
    case ExprKind::Var: {
      auto it = b.find(e.name);
      if (it == b.end()) throw std::invalid_argument("unbound variable '" + e.name + "'");
      Type vt = it->second.type();
      // Empty lists carry their declared element type; anything else must match.
      if (vt != e.type && !(e.type == Type::rational() && vt == Type::integer()))
        throw std::invalid_argument("variable '" + e.name + "' bound to " + it->second.str() + " of type " +
                                    vt.str() + ", expected " + e.type.str());
      return it->second;
    }
    case ExprKind::Eq: {
      Value l = evaluate_term(*e.args[0], b, reg);
      Value r = evaluate_term(*e.args[1], b, reg);
      return Value::boolean(l == r);
    }
    case ExprKind::Ge:
    case ExprKind::Gt: {
      Rational l = evaluate_term(*e.args[0], b, reg).numeric();
      Rational r = evaluate_term(*e.args[1], b, reg).numeric();
      return Value::boolean(e.kind == ExprKind::Ge ? l >= r : l > r);
    }
    case ExprKind::And: {
      bool l = evaluate_term(*e.args[0], b, reg).as_bool();
      bool r = evaluate_term(*e.args[1], b, reg).as_bool();
      return Value::boolean(l && r);
    }
    case ExprKind::Not: return Value::boolean(!evaluate_term(*e.args[0], b, reg).as_bool());
    case ExprKind::Add: {
      Rational l = evaluate_term(*e.args[0], b, reg).numeric();
      Rational r = evaluate_term(*e.args[1], b, reg).numeric();
      return make_numeric(e.type, l + r);
    }
    case ExprKind::Neg: return make_numeric(e.type, -evaluate_term(*e.args[0], b, reg).numeric());
    case ExprKind::Apply: {
      const FunctionSig* sig = reg.function(e.name);
      if (!sig) throw std::invalid_argument("unknown function '" + e.name + "'");
      std::vector<Value> args;
      int list_pos = -1;
      for (size_t i = 0; i < e.args.size(); ++i) {
        args.push_back(evaluate_term(*e.args[i], b, reg));
        if (e.args[i]->type.list) list_pos = static_cast<int>(i);
      }
      if (list_pos < 0) {
        for (size_t i = 0; i < args.size(); ++i) args[i] = coerce(args[i], sig->args[i]);
        return apply_table(*sig, args);
      }
      // component-wise application over the list argument
      std::vector<Value> out;
      for (const auto& item : args[list_pos].as_list().items) {
        auto point = args;
        point[list_pos] = item;
        for (size_t i = 0; i < point.size(); ++i) point[i] = coerce(point[i], sig->args[i]);
        out.push_back(apply_table(*sig, point));
      }
      return Value::list(sig->result, std::move(out));
    }
    case ExprKind::Agg: {
      Value l = evaluate_term(*e.args[0], b, reg);
      auto r = aggregate(e.agg, l.as_list().items);
      return coerce(r, e.type);
    }
  }
  throw std::logic_error("bad expression node");
}

bool evaluate(const Expr& e, const Binding& b, const TypeRegistry& reg) {
  return evaluate_term(e, b, reg).as_bool();
}

bool uses_uninterpreted(const Expr& e, const TypeRegistry& reg) {
  if (e.kind == ExprKind::Apply) {
    const FunctionSig* sig = reg.function(e.name);
    if (!sig || !sig->table) return true;
  }
  for (const auto& a : e.args)
    if (uses_uninterpreted(*a, reg)) return true;
  return false;
}

}  // namespace dopid
