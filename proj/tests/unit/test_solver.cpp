#include "common.hpp"
#include "generators.hpp"

#include "dopid/decoder.hpp"
#include "dopid/oracle.hpp"

#include <cstdlib>

using namespace dopid;

namespace {

bool have_z3() { return std::system("command -v z3 >/dev/null 2>&1") == 0; }

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("s-expressions") {
    auto xs = parse_sexprs("(a (b 1) \"x y\") ; note\n c");
    REQUIRE(xs.size() == 2);
    CHECK(xs[0].items.size() == 3);
    CHECK(xs[0].items[2].atom == "\"x y\"");
    CHECK(xs[1].is("c"));
    CHECK(complete_prefix("  (a (b)") == 0);
    CHECK(complete_prefix("(a) (b)") == 3);
    CHECK(complete_prefix("sat") == 0);
    CHECK(complete_prefix("sat\n") == 3);
    CHECK(sexpr_integer(parse_sexpr("(- 12)")) == -12);
    CHECK(sexpr_rational(parse_sexpr("(/ 3 4)")) == parse_rational("3/4"));
    CHECK(sexpr_rational(parse_sexpr("(- 2.5)")) == parse_rational("-5/2"));
    CHECK(sexpr_bool(parse_sexpr("true")));
    CHECK_THROWS_AS(parse_sexpr("(a"), SExprError);
    CHECK_THROWS_AS(sexpr_integer(parse_sexpr("x")), SExprError);
  }

  TEST_CASE("sessions scope assertions") {
    SolverSession s(fixtures::solver());
    s.send("(set-option :produce-models true)\n(set-logic QF_LIA)\n(declare-fun x () Int)\n(assert (> x 1))\n");
    CHECK(s.check() == SolveStatus::Sat);
    s.send("(push 1)\n(assert (< x 2))\n");
    CHECK(s.check() == SolveStatus::Unsat);
    s.send("(pop 1)\n(assert (< x 3))\n");
    REQUIRE(s.check() == SolveStatus::Sat);
    auto m = s.values({{"x", "Int"}});
    CHECK(model_int(m, "x") == 2);
  }

  TEST_CASE("missing solver executable") {
    SolverConfig c;
    c.exe = "/nonexistent/solver";
    CHECK_THROWS(SolverSession{c});
  }

  TEST_CASE("minimum equals the brute-force optimum on the running example") {
    const Net& net = fixtures::running_net();
    const EventLog& log = fixtures::running_log();
    auto tg = trace_graphs(log).at(0);
    Bounds b = compute_bounds(net, log, tg, fixtures::small_bounds());
    SmtProblem p = encode(net, log, tg, b);
    auto r = minimize(p, fixtures::solver());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.optimal);
    OracleResult o = brute_force_align(net, log, tg, 6, make_pools(net, log, b));
    CHECK(o.cost == 9);
    CHECK(r.optimum == 9);
    Run run = decode_run(net, p, r.model);
    CHECK(replay(net, run).accepted);
    auto g = decode_alignment(net, log, tg, p, r.model, run);
    CHECK(alignment_cost(g) == 9);
    CHECK(validate_alignment(g, tg, log, net).valid());

    SUBCASE("one process per probe") {
      SolverConfig c = fixtures::solver();
      c.oneshot = true;
      auto r1 = minimize(p, c);
      CHECK(r1.optimal);
      CHECK(r1.optimum == 9);
    }
    SUBCASE("native minimization") {
      if (!have_z3()) return;
      SolverConfig c = fixtures::solver();
      c.exe = "z3";
      c.mode = MinimizeMode::Native;
      auto r2 = minimize(p, c);
      CHECK(r2.optimal);
      CHECK(r2.optimum == 9);
    }
  }

  TEST_CASE("lowered guards agree with evaluation (sample)") {
    auto w = testing::guard_world();
    std::mt19937_64 rng(3);
    SolverSession s(fixtures::solver());
    s.send(testing::guard_prelude(w));
    int agree = 0, total = 0;
    for (int i = 0; i < 150; ++i) {
      auto c = testing::random_guard(rng, w);
      bool want = testing::evaluate_strict(*c.expr, c.binding, w.registry);
      s.send("(push 1)\n" + testing::guard_query(w, c, rng));
      auto st = s.check();
      s.send("(pop 1)\n");
      REQUIRE(st != SolveStatus::Unknown);
      bool got = st == SolveStatus::Sat;
      CHECK_MESSAGE(got == want, print(*c.expr));
      agree += got == want;
      ++total;
    }
    CHECK(agree == total);
  }

  TEST_CASE("guard oracle decides the ship guard") {
    const Net& net = fixtures::running_net();
    GuardOracle go = make_guard_oracle(fixtures::solver());
    Run run = fixtures::running_run("run-optimal.json");
    size_t ship = net.transition_index("ship");
    CHECK(go(net, ship, run.back().binding));
    Binding b = run.back().binding;
    b["m"] = Value::string("truck");
    CHECK_FALSE(go(net, ship, b));
  }
}
