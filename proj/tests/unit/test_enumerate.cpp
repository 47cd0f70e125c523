#include "common.hpp"
#include "generators.hpp"

using namespace dopid;

TEST_SUITE("enumerate") {
  TEST_CASE("candidate bindings of the running example") {
    const Net& net = fixtures::running_net();
    auto tg = trace_graphs(fixtures::running_log()).at(0);
    Bounds bd = compute_bounds(net, fixtures::running_log(), tg, fixtures::small_bounds());
    Pools pools = make_pools(net, fixtures::running_log(), bd);
    Marking m = empty_marking(net);
    SyntheticUse used;
    // only the creators fire initially
    CHECK(candidate_bindings(net, m, net.transition_index("place_order"), pools, used).empty());
    auto cs = candidate_bindings(net, m, net.transition_index("create_order"), pools, used);
    REQUIRE(!cs.empty());
    std::set<Value> ids;
    for (const auto& b : cs) {
      CHECK(enabled(net, m, net.transition_index("create_order"), b));
      ids.insert(b.at("nu_o"));
    }
    // the log's order and the first synthetic one
    CHECK(ids.size() == 2);
    CHECK(ids.count(Value::object("o1", "order")));
    CHECK(ids.count(pools.universe.synthetic.at("order").at(0)));
  }

  TEST_CASE("synthetic ids are used in pool order") {
    Pools pools;
    pools.universe.synthetic["a"] = {Value::object("#a1", "a"), Value::object("#a2", "a")};
    pools.universe.objects = pools.universe.synthetic["a"];
    SyntheticUse u = advance_use({}, pools, {{"x", Value::object("#a1", "a")}});
    CHECK(u["a"] == 1);
    u = advance_use(u, pools, {{"x", Value::object("#a2", "a")}});
    CHECK(u["a"] == 2);
  }

  TEST_CASE("key functionality") {
    Marking m(1);
    m[0].insert({Value::object("a", "t"), Value::integer(1)});
    CHECK(key_functional(m));
    m[0].insert({Value::object("a", "t"), Value::integer(2)});
    CHECK_FALSE(key_functional(m));
  }

  TEST_CASE("enumerated runs replay as accepted (property)") {
    std::mt19937_64 rng(5);
    size_t runs = 0, instances = 0;
    for (int i = 0; i < 200 && instances < 60; ++i) {
      auto I = testing::random_instance(rng);
      if (!I) continue;
      auto tgs = trace_graphs(I->log);
      if (tgs.empty()) continue;
      ++instances;
      Bounds bd = compute_bounds(I->net, I->log, tgs[0], fixtures::small_bounds(std::min<size_t>(I->max_len, 4)));
      Pools pools = make_pools(I->net, I->log, bd);
      size_t seen = 0;
      auto st = enumerate_runs(I->net, bd.n, pools, [&](const Run& r) {
        CHECK(r.size() <= bd.n);
        CHECK(replay(I->net, r).accepted);
        ++runs;
        return ++seen < 40;
      });
      CHECK(st.runs == seen);
    }
    CHECK(instances >= 30);
    CHECK(runs >= 50);
  }

  TEST_CASE("enumeration finds the optimal run of the running example") {
    const Net& net = fixtures::running_net();
    auto tg = trace_graphs(fixtures::running_log()).at(0);
    Bounds bd = compute_bounds(net, fixtures::running_log(), tg, fixtures::small_bounds(6));
    Pools pools = make_pools(net, fixtures::running_log(), bd);
    Run want = fixtures::running_run("run-optimal.json");
    bool found = false;
    enumerate_runs(net, 6, pools, [&](const Run& r) {
      if (r.size() != want.size()) return true;
      bool same = true;
      for (size_t i = 0; i < r.size(); ++i)
        same = same && r[i].transition == want[i].transition && r[i].binding == want[i].binding;
      found = found || same;
      return !found;
    });
    CHECK(found);
  }
}
