#include "common.hpp"

using namespace dopid;

namespace {

CheckOptions small(bool oracle) {
  CheckOptions o;
  o.bounds = fixtures::small_bounds();
  o.solver = fixtures::solver();
  o.oracle = oracle;
  return o;
}

}  // namespace

TEST_SUITE("check") {
  TEST_CASE("solver and brute force agree on the running example") {
    const Net& net = fixtures::running_net();
    const EventLog& log = fixtures::running_log();
    auto smt = run_check(net, log, small(false));
    auto bf = run_check(net, log, small(true));
    REQUIRE(smt.components.size() == 1);
    CHECK(smt.ok());
    CHECK(bf.ok());
    CHECK(smt.method == "smt");
    CHECK(bf.method == "oracle");
    CHECK(smt.total_cost == 9);
    CHECK(bf.total_cost == 9);
    const auto& c = smt.components[0];
    CHECK(c.replay_accepted);
    // log moves 4 + 1 + 2 + 4, model moves of the six-step run 3 + 1 + 2 + 4
    CHECK(c.trivial_cost == 21);
    CHECK(c.fitness == doctest::Approx(12.0 / 21.0));
    CHECK(smt.fitness >= 0);
    CHECK(smt.fitness <= 1);
  }

  TEST_CASE("reports are deterministic") {
    const Net& net = fixtures::running_net();
    const EventLog& log = fixtures::running_log();
    auto a = check_report_to_json(net, run_check(net, log, small(false)));
    auto b = check_report_to_json(net, run_check(net, log, small(false)));
    a["components"][0].erase("solver");
    b["components"][0].erase("solver");
    CHECK(a.dump() == b.dump());
    CHECK(a["ok"] == true);
    CHECK(a["total_cost"] == 9);
  }

  TEST_CASE("a log produced by the model costs nothing") {
    EventLog log = load_log_text(R"({
      "objects": {"o1": "order", "p1": "product"},
      "events": [
        {"id": "e0", "activity": "place order", "objects": ["o1", "p1"], "time": 1, "vmap": {"d": 3}},
        {"id": "e1", "activity": "pay cc", "objects": ["o1"], "time": 2},
        {"id": "e2", "activity": "pick item", "objects": ["o1", "p1"], "time": 3},
        {"id": "e3", "activity": "ship", "objects": ["o1", "p1"], "time": 4, "vmap": {"d": 3, "m": "car"}}
      ]})");
    auto r = run_check(fixtures::running_net(), log, small(false));
    CHECK(r.ok());
    CHECK(r.total_cost == 0);
    CHECK(r.fitness == doctest::Approx(1.0));
  }

  TEST_CASE("independent components are aligned separately") {
    EventLog log = load_log_text(R"({
      "objects": {"o1": "order", "p1": "product", "o2": "order", "p2": "product"},
      "events": [
        {"id": "a", "activity": "place order", "objects": ["o1", "p1"], "time": 1, "vmap": {"d": 3}},
        {"id": "b", "activity": "place order", "objects": ["o2", "p2"], "time": 2, "vmap": {"d": 1}}
      ]})");
    CheckOptions o = small(true);
    o.jobs = 2;
    auto r = run_check(fixtures::running_net(), log, o);
    REQUIRE(r.components.size() == 2);
    CHECK(r.ok());
    // both need pay, pick and ship; the second also a different d
    CHECK(r.components[0].cost < r.components[1].cost);
    CHECK(r.total_cost == r.components[0].cost + r.components[1].cost);
    auto st = log_stats(log);
    CHECK(st["components"] == 2);
    CHECK(st["events"] == 2);
  }
}
