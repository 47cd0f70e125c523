#include "dopid/expr.hpp"

#include <cctype>

namespace dopid {

const char* agg_name(AggOp op) {
  switch (op) {
    case AggOp::Sum: return "sum";
    case AggOp::Min: return "min";
    case AggOp::Max: return "max";
    case AggOp::Mean: return "mean";
  }
  return "?";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.type != b.type || a.name != b.name || a.agg != b.agg) return false;
  if (a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case ExprKind::BoolLit:
    case ExprKind::IntLit:
    case ExprKind::RatLit:
    case ExprKind::StrLit:
      if (!(a.literal == b.literal)) return false;
      break;
    default: break;
  }
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

ExprPtr make(ExprKind k, Type t, std::vector<ExprPtr> args = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->type = std::move(t);
  e->args = std::move(args);
  return e;
}

Type arith_join(const Type& a, const Type& b) {
  return (a.kind == BaseKind::Rat || b.kind == BaseKind::Rat) ? Type::rational() : Type::integer();
}

void require_arith(const Expr& e, const char* ctx) {
  if (!e.type.is_arithmetic())
    throw std::invalid_argument(std::string(ctx) + " expects an arithmetic operand, got " + e.type.str());
}

void require_bool(const Expr& e, const char* ctx) {
  if (e.type != Type::boolean())
    throw std::invalid_argument(std::string(ctx) + " expects a constraint, got " + e.type.str());
}

bool param_accepts(const Type& param, const Type& arg) {
  if (param == arg) return true;
  return param == Type::rational() && arg == Type::integer();
}

}  // namespace

namespace build {

ExprPtr bool_lit(bool b) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::BoolLit;
  e->type = Type::boolean();
  e->literal = Value::boolean(b);
  return e;
}

ExprPtr int_lit(Integer v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::IntLit;
  e->type = Type::integer();
  e->literal = Value::integer(std::move(v));
  return e;
}

ExprPtr rat_lit(Rational v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::RatLit;
  e->type = Type::rational();
  e->literal = Value::rational(std::move(v));
  return e;
}

ExprPtr str_lit(std::string text, Type type) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::StrLit;
  e->type = type;
  if (type.kind == BaseKind::FinSet)
    e->literal = Value::finset(type.name, std::move(text));
  else if (type == Type::string())
    e->literal = Value::string(std::move(text));
  else
    throw std::invalid_argument("string literal cannot have type " + type.str());
  return e;
}

ExprPtr var(std::string name, Type type) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->type = std::move(type);
  e->name = std::move(name);
  return e;
}

ExprPtr eq(ExprPtr a, ExprPtr b) {
  if (a->type.list || b->type.list) throw std::invalid_argument("cannot compare lists");
  if (a->type.is_arithmetic() || b->type.is_arithmetic())
    throw std::invalid_argument("'=' node is for non-arithmetic terms");
  if (a->type != b->type)
    throw std::invalid_argument("type mismatch: " + a->type.str() + " vs " + b->type.str());
  return make(ExprKind::Eq, Type::boolean(), {std::move(a), std::move(b)});
}

ExprPtr ge(ExprPtr a, ExprPtr b) {
  require_arith(*a, ">=");
  require_arith(*b, ">=");
  return make(ExprKind::Ge, Type::boolean(), {std::move(a), std::move(b)});
}

ExprPtr gt(ExprPtr a, ExprPtr b) {
  require_arith(*a, ">");
  require_arith(*b, ">");
  return make(ExprKind::Gt, Type::boolean(), {std::move(a), std::move(b)});
}

ExprPtr conj(ExprPtr a, ExprPtr b) {
  require_bool(*a, "&&");
  require_bool(*b, "&&");
  return make(ExprKind::And, Type::boolean(), {std::move(a), std::move(b)});
}

ExprPtr neg_c(ExprPtr a) {
  require_bool(*a, "!");
  return make(ExprKind::Not, Type::boolean(), {std::move(a)});
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  require_arith(*a, "+");
  require_arith(*b, "+");
  auto t = arith_join(a->type, b->type);
  return make(ExprKind::Add, t, {std::move(a), std::move(b)});
}

ExprPtr minus(ExprPtr a) {
  require_arith(*a, "unary -");
  auto t = a->type;
  return make(ExprKind::Neg, t, {std::move(a)});
}

ExprPtr apply(const FunctionSig& sig, std::vector<ExprPtr> args) {
  if (args.size() != sig.args.size())
    throw std::invalid_argument("function '" + sig.name + "' expects " + std::to_string(sig.args.size()) +
                                " arguments, got " + std::to_string(args.size()));
  bool lifted = false;
  for (size_t i = 0; i < args.size(); ++i) {
    const Type& at = args[i]->type;
    if (at.list) {
      if (lifted) throw std::invalid_argument("function '" + sig.name + "' applied to more than one list");
      lifted = true;
      if (!param_accepts(sig.args[i], at.element()))
        throw std::invalid_argument("argument " + std::to_string(i + 1) + " of '" + sig.name + "' has type " +
                                    at.str() + ", expected " + sig.args[i].str());
    } else if (!param_accepts(sig.args[i], at)) {
      throw std::invalid_argument("argument " + std::to_string(i + 1) + " of '" + sig.name + "' has type " +
                                  at.str() + ", expected " + sig.args[i].str());
    }
  }
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Apply;
  e->type = lifted ? sig.result.as_list() : sig.result;
  e->name = sig.name;
  e->args = std::move(args);
  return e;
}

ExprPtr aggregate(AggOp op, ExprPtr list) {
  if (!list->type.list) throw std::invalid_argument(std::string(agg_name(op)) + " expects a list term");
  Type elem = list->type.element();
  if (!elem.is_arithmetic())
    throw std::invalid_argument(std::string(agg_name(op)) + " expects a numeric list, got " + list->type.str());
  if (op == AggOp::Mean && elem.kind != BaseKind::Rat)
    throw std::invalid_argument("mean is only defined over rational lists");
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Agg;
  e->type = elem;
  e->agg = op;
  e->args = {std::move(list)};
  return e;
}

}  // namespace build

// ---------------------------------------------------------------- printing

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string print(const Expr& e) {
  switch (e.kind) {
    case ExprKind::BoolLit: return e.literal.as_bool() ? "true" : "false";
    case ExprKind::IntLit: return e.literal.as_int().str();
    case ExprKind::RatLit: {
      const auto& r = e.literal.as_rat();
      return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
    }
    case ExprKind::StrLit: return quote(e.literal.symbol());
    case ExprKind::Var: return e.name;
    case ExprKind::Eq: return "(" + print(*e.args[0]) + " == " + print(*e.args[1]) + ")";
    case ExprKind::Ge: return "(" + print(*e.args[0]) + " >= " + print(*e.args[1]) + ")";
    case ExprKind::Gt: return "(" + print(*e.args[0]) + " > " + print(*e.args[1]) + ")";
    case ExprKind::And: return "(" + print(*e.args[0]) + " && " + print(*e.args[1]) + ")";
    case ExprKind::Not: return "!(" + print(*e.args[0]) + ")";
    case ExprKind::Add: return "(" + print(*e.args[0]) + " + " + print(*e.args[1]) + ")";
    case ExprKind::Neg: return "-(" + print(*e.args[0]) + ")";
    case ExprKind::Apply: {
      std::string out = e.name + "(";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print(*e.args[i]);
      }
      return out + ")";
    }
    case ExprKind::Agg: return std::string(agg_name(e.agg)) + "(" + print(*e.args[0]) + ")";
  }
  return "?";
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  if (e.kind == ExprKind::Var) out.insert(e.name);
  for (const auto& a : e.args) {
    auto sub = free_variables(*a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

// ----------------------------------------------------------------- parsing

namespace {

enum class Tok { End, Ident, Int, Rat, Str, LParen, RParen, Comma, AndAnd, OrOr, Bang, EqEq, NotEq, Le, Lt, GeT, GtT,
                 Plus, Minus };

struct Token_ {
  Tok kind;
  std::string text;
  size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token_> run() {
    std::vector<Token_> out;
    while (true) {
      skip_ws();
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", i_});
        return out;
      }
      size_t start = i_;
      char c = s_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        out.push_back({Tok::Ident, s_.substr(start, i_ - start), start});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number(start));
      } else if (c == '"') {
        ++i_;
        std::string text;
        while (true) {
          if (i_ >= s_.size()) throw ParseError(start, "unterminated string literal");
          char d = s_[i_++];
          if (d == '"') break;
          if (d == '\\') {
            if (i_ >= s_.size()) throw ParseError(start, "unterminated string literal");
            d = s_[i_++];
          }
          text += d;
        }
        out.push_back({Tok::Str, text, start});
      } else {
        auto two = s_.substr(i_, 2);
        auto emit2 = [&](Tok k) {
          out.push_back({k, two, start});
          i_ += 2;
        };
        auto emit1 = [&](Tok k) {
          out.push_back({k, std::string(1, c), start});
          ++i_;
        };
        if (two == "&&") emit2(Tok::AndAnd);
        else if (two == "||") emit2(Tok::OrOr);
        else if (two == "==") emit2(Tok::EqEq);
        else if (two == "!=") emit2(Tok::NotEq);
        else if (two == "<=") emit2(Tok::Le);
        else if (two == ">=") emit2(Tok::GeT);
        else if (c == '<') emit1(Tok::Lt);
        else if (c == '>') emit1(Tok::GtT);
        else if (c == '!') emit1(Tok::Bang);
        else if (c == '(') emit1(Tok::LParen);
        else if (c == ')') emit1(Tok::RParen);
        else if (c == ',') emit1(Tok::Comma);
        else if (c == '+') emit1(Tok::Plus);
        else if (c == '-') emit1(Tok::Minus);
        else throw ParseError(start, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  Token_ number(size_t start) {
    auto digits = [&] {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    };
    digits();
    if (i_ < s_.size() && (s_[i_] == '/' || s_[i_] == '.') && i_ + 1 < s_.size() &&
        std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
      ++i_;
      digits();
      return {Tok::Rat, s_.substr(start, i_ - start), start};
    }
    return {Tok::Int, s_.substr(start, i_ - start), start};
  }

  const std::string& s_;
  size_t i_ = 0;
};

class Parser {
 public:
  Parser(const std::string& text, const TypeEnv& env, const TypeRegistry& reg)
      : toks_(Lexer(text).run()), env_(env), reg_(reg) {}

  ExprPtr parse() {
    auto e = parse_or();
    if (peek().kind != Tok::End) throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
    if (e->type != Type::boolean()) throw ParseError(0, "guard must be a constraint, got a term of type " + e->type.str());
    return e;
  }

 private:
  const Token_& peek() const { return toks_[k_]; }
  const Token_& take() { return toks_[k_++]; }
  bool accept(Tok t) {
    if (peek().kind == t) {
      ++k_;
      return true;
    }
    return false;
  }
  void expect(Tok t, const char* what) {
    if (!accept(t)) throw ParseError(peek().pos, std::string("expected ") + what);
  }

  template <typename F>
  ExprPtr checked(size_t pos, F&& f) {
    try {
      return f();
    } catch (const std::invalid_argument& ex) {
      throw ParseError(pos, ex.what());
    }
  }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (peek().kind == Tok::OrOr) {
      size_t pos = take().pos;
      auto rhs = parse_and();
      lhs = checked(pos, [&] { return build::neg_c(build::conj(build::neg_c(lhs), build::neg_c(rhs))); });
    }
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_not();
    while (peek().kind == Tok::AndAnd) {
      size_t pos = take().pos;
      auto rhs = parse_not();
      lhs = checked(pos, [&] { return build::conj(lhs, rhs); });
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (peek().kind == Tok::Bang) {
      size_t pos = take().pos;
      auto inner = parse_not();
      return checked(pos, [&] { return build::neg_c(inner); });
    }
    return parse_cmp();
  }

  // A string literal takes its type from the other side of a comparison.
  static ExprPtr retype_literal(const ExprPtr& lit, const Type& target, const TypeRegistry& reg) {
    if (lit->kind != ExprKind::StrLit || lit->type == target) return lit;
    if (target.kind == BaseKind::FinSet && !target.list) {
      const auto& dom = reg.finset_domain(target.name);
      if (std::find(dom.begin(), dom.end(), lit->literal.symbol()) == dom.end())
        throw std::invalid_argument("'" + lit->literal.symbol() + "' is not in the domain of " + target.name);
      return build::str_lit(lit->literal.symbol(), target);
    }
    return lit;
  }

  ExprPtr parse_cmp() {
    auto lhs = parse_sum();
    Tok op = peek().kind;
    if (op != Tok::EqEq && op != Tok::NotEq && op != Tok::Le && op != Tok::Lt && op != Tok::GeT && op != Tok::GtT)
      return lhs;
    size_t pos = take().pos;
    auto rhs = parse_sum();
    return checked(pos, [&]() -> ExprPtr {
      auto a = retype_literal(lhs, rhs->type, reg_);
      auto b = retype_literal(rhs, a->type, reg_);
      switch (op) {
        case Tok::GeT: return build::ge(a, b);
        case Tok::GtT: return build::gt(a, b);
        case Tok::Le: return build::ge(b, a);
        case Tok::Lt: return build::gt(b, a);
        case Tok::EqEq:
        case Tok::NotEq: {
          ExprPtr e = (a->type.is_arithmetic() && b->type.is_arithmetic())
                          ? build::conj(build::ge(a, b), build::ge(b, a))
                          : build::eq(a, b);
          return op == Tok::EqEq ? e : build::neg_c(e);
        }
        default: throw std::logic_error("unreachable");
      }
    });
  }

  ExprPtr parse_sum() {
    auto lhs = parse_unary();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const auto& t = take();
      bool sub = t.kind == Tok::Minus;
      auto rhs = parse_unary();
      lhs = checked(t.pos, [&] { return build::add(lhs, sub ? build::minus(rhs) : rhs); });
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::Minus) {
      size_t pos = take().pos;
      // "-5" and "-3/2" are literals; "-(x)" and "-x" negate a term.
      if (peek().kind == Tok::Int) return build::int_lit(-Integer(take().text));
      if (peek().kind == Tok::Rat) return build::rat_lit(-parse_rational(take().text));
      auto inner = parse_unary();
      return checked(pos, [&] { return build::minus(inner); });
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const auto& t = take();
    switch (t.kind) {
      case Tok::Int: return build::int_lit(Integer(t.text));
      case Tok::Rat: return build::rat_lit(parse_rational(t.text));
      case Tok::Str: return build::str_lit(t.text, Type::string());
      case Tok::LParen: {
        auto e = parse_or();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        if (t.text == "true") return build::bool_lit(true);
        if (t.text == "false") return build::bool_lit(false);
        if (peek().kind == Tok::LParen) return parse_call(t);
        auto it = env_.find(t.text);
        if (it == env_.end()) throw ParseError(t.pos, "unknown identifier '" + t.text + "'");
        return build::var(t.text, it->second);
      }
      default: throw ParseError(t.pos, t.kind == Tok::End ? "unexpected end of guard" : "unexpected '" + t.text + "'");
    }
  }

  ExprPtr parse_call(const Token_& name) {
    expect(Tok::LParen, "'('");
    std::vector<ExprPtr> args;
    if (peek().kind != Tok::RParen) {
      do {
        args.push_back(parse_or());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    static const std::map<std::string, AggOp> aggs = {
        {"sum", AggOp::Sum}, {"min", AggOp::Min}, {"max", AggOp::Max}, {"mean", AggOp::Mean}};
    if (auto it = aggs.find(name.text); it != aggs.end() && !reg_.function(name.text)) {
      if (args.size() != 1) throw ParseError(name.pos, name.text + " takes exactly one argument");
      return checked(name.pos, [&] { return build::aggregate(it->second, args[0]); });
    }
    const FunctionSig* sig = reg_.function(name.text);
    if (!sig) throw ParseError(name.pos, "unknown function '" + name.text + "'");
    return checked(name.pos, [&] {
      for (size_t i = 0; i < args.size() && i < sig->args.size(); ++i) {
        Type target = sig->args[i];
        if (args[i]->kind == ExprKind::StrLit) args[i] = retype_literal(args[i], target, reg_);
      }
      return build::apply(*sig, std::move(args));
    });
  }

  std::vector<Token_> toks_;
  size_t k_ = 0;
  const TypeEnv& env_;
  const TypeRegistry& reg_;
};

}  // namespace

ExprPtr parse_constraint(const std::string& text, const TypeEnv& env, const TypeRegistry& registry) {
  return Parser(text, env, registry).parse();
}

}  // namespace dopid
