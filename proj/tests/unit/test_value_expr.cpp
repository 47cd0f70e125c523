#include "common.hpp"
#include "generators.hpp"

#include "dopid/eval.hpp"

using namespace dopid;

TEST_SUITE("value-expr") {
  TEST_CASE("numeric values match across int and rat; symbols across string and finset") {
    CHECK(values_match(Value::integer(3), Value::rational(Rational(6, 2))));
    CHECK_FALSE(values_match(Value::integer(3), Value::rational(Rational(7, 2))));
    CHECK(values_match(Value::string("red"), Value::finset("col", "red")));
    CHECK_FALSE(values_match(Value::string("red"), Value::string("blue")));
    CHECK_FALSE(values_match(Value::integer(1), Value::string("1")));
  }

  TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-1.25") == Rational(-5, 4));
    CHECK(parse_rational("7") == Rational(7));
    CHECK_THROWS(parse_rational("1/0"));
  }

  TEST_CASE("ship guard of the running example") {
    const Net& net = fixtures::running_net();
    const Expr& g = *net.transitions[net.transition_index("ship")].guard;
    auto eval = [&](int d, const char* m) {
      return evaluate(g, {{"d", Value::integer(d)}, {"m", Value::string(m)}}, net.registry);
    };
    CHECK(eval(3, "car"));
    CHECK_FALSE(eval(3, "truck"));
    CHECK(eval(6, "truck"));
    CHECK_FALSE(eval(6, "car"));
    CHECK(eval(5, "car"));
  }

  TEST_CASE("pay bt guard sums the table values of the order's products") {
    const Net& net = fixtures::running_net();
    const Expr& g = *net.transitions[net.transition_index("pay_bt")].guard;
    auto list = [](std::vector<std::string> ids) {
      std::vector<Value> xs;
      for (auto& i : ids) xs.push_back(Value::object(i, "product"));
      return Value::list(Type::object("product"), xs);
    };
    // 600 + 500 > 1000
    CHECK_FALSE(evaluate(g, {{"P", list({"p1", "p2"})}}, net.registry));
    CHECK(evaluate(g, {{"P", list({"p2"})}}, net.registry));
    CHECK(evaluate(g, {{"P", list({})}}, net.registry));
    // no table entry: undefined
    CHECK_THROWS_AS(evaluate(g, {{"P", list({"p9"})}}, net.registry), EvalError);
  }

  TEST_CASE("aggregates over empty lists are undefined, except sum") {
    auto w = testing::guard_world();
    auto X = build::var("X", Type::object("a").as_list());
    auto rX = build::apply(*w.registry.function("r"), {X});
    Binding b{{"X", Value::list(Type::object("a"), {})}};
    CHECK(evaluate_term(*build::aggregate(AggOp::Sum, rX), b, w.registry) == Value::rational(0));
    CHECK_THROWS_AS(evaluate_term(*build::aggregate(AggOp::Min, rX), b, w.registry), EvalError);
    CHECK_THROWS_AS(evaluate_term(*build::aggregate(AggOp::Mean, rX), b, w.registry), EvalError);
    b["X"] = Value::list(Type::object("a"), {Value::object("a1", "a"), Value::object("a2", "a")});
    // r(a1) = 1/2, r(a2) = 3
    CHECK(evaluate_term(*build::aggregate(AggOp::Mean, rX), b, w.registry) == Value::rational(Rational(7, 4)));
    CHECK(evaluate_term(*build::aggregate(AggOp::Max, rX), b, w.registry) == Value::rational(3));
  }

  TEST_CASE("parse errors and type errors") {
    const Net& net = fixtures::running_net();
    TypeEnv env(net.variables.begin(), net.variables.end());
    CHECK_THROWS_AS(parse_constraint("d >", env, net.registry), ParseError);
    CHECK_THROWS(parse_constraint("d == \"car\"", env, net.registry));
    CHECK_THROWS(parse_constraint("d + 1", env, net.registry));
    CHECK_THROWS(parse_constraint("unknown > 1", env, net.registry));
    CHECK_NOTHROW(parse_constraint("d != 4 && !(m == \"car\")", env, net.registry));
  }

  TEST_CASE("print then parse rebuilds the expression (property)") {
    auto w = testing::guard_world();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
      auto c = testing::random_guard(rng, w, 4);
      std::string text = print(*c.expr);
      ExprPtr back;
      REQUIRE_NOTHROW(back = parse_constraint(text, w.env, w.registry));
      INFO(text);
      CHECK(structurally_equal(*c.expr, *back));
      CHECK(print(*back) == text);
    }
  }
}
