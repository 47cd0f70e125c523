#include "common.hpp"
#include "generators.hpp"

using namespace dopid;

namespace {

Value obj(const std::string& id, const std::string& type) { return Value::object(id, type); }

Value products(std::vector<std::string> ids) {
  std::vector<Value> xs;
  for (auto& i : ids) xs.push_back(obj(i, "product"));
  return Value::list(Type::object("product"), xs);
}

bool has(const std::vector<Finding>& fs, Reason r) {
  for (const auto& f : fs)
    if (f.reason == r) return true;
  return false;
}

Run prefix(const Run& r, size_t n) { return Run(r.begin(), r.begin() + static_cast<long>(n)); }

}  // namespace

TEST_SUITE("token-game") {
  TEST_CASE("literal log sequence is rejected at ship") {
    const Net& net = fixtures::running_net();
    Run run = fixtures::running_run("run-literal.json");
    auto out = replay(net, run);
    CHECK_FALSE(out.accepted);
    CHECK(out.step == 6);
    CHECK(has(out.findings, Reason::Maximality));
    CHECK(has(out.findings, Reason::GuardFalse));
  }

  TEST_CASE("adding pick(p2) and shipping by car is accepted") {
    const Net& net = fixtures::running_net();
    auto out = replay(net, fixtures::running_run("run-fixed.json"));
    CHECK(out.accepted);
    CHECK(out.final_spec == 0);
    CHECK(out.final_marking[net.place_index("q9")].size() == 2);
  }

  TEST_CASE("empty run misses the final marking") {
    auto out = replay(fixtures::running_net(), {});
    CHECK_FALSE(out.accepted);
    CHECK(has(out.findings, Reason::FinalMismatch));
  }

  TEST_CASE("nu variables need fresh objects") {
    const Net& net = fixtures::running_net();
    Run run = fixtures::running_run("run-fixed.json");
    // a second order with the id of the first
    run.insert(run.begin() + 1, Step{net.transition_index("create_order"), {{"nu_o", obj("o1", "order")}}});
    auto out = replay(net, run);
    CHECK_FALSE(out.accepted);
    CHECK(out.step == 1);
    CHECK(has(out.findings, Reason::NotFresh));
  }

  TEST_CASE("bindings must be type preserving and duplicate free") {
    const Net& net = fixtures::running_net();
    Run run = prefix(fixtures::running_run("run-fixed.json"), 4);
    Marking m = replay_from(net, prefix(run, 3), empty_marking(net)).final_marking;
    size_t po = net.transition_index("place_order");
    Binding b = run[3].binding;
    b["d"] = Value::string("3");
    CHECK(has(check_enabled(net, m, po, b).findings, Reason::BadBinding));
    b = run[3].binding;
    b["P"] = products({"p1", "p1"});
    CHECK(has(check_enabled(net, m, po, b).findings, Reason::BadBinding));
    b = run[3].binding;
    b.erase("d");
    CHECK(has(check_enabled(net, m, po, b).findings, Reason::BadBinding));
    b = run[3].binding;
    b["d"] = Value::integer(2);
    CHECK(has(check_enabled(net, m, po, b).findings, Reason::GuardFalse));
    b = run[3].binding;
    b["P"] = products({"p1", "p3"});
    CHECK(has(check_enabled(net, m, po, b).findings, Reason::NotContained));
    // the subset template may leave products behind
    b["P"] = products({"p2"});
    CHECK(enabled(net, m, po, b));
  }

  TEST_CASE("pay_bt guard sums the product costs") {
    const Net& net = fixtures::running_net();
    Run run = fixtures::running_run("run-fixed.json");
    Marking m = replay_from(net, prefix(run, 4), empty_marking(net)).final_marking;
    size_t bt = net.transition_index("pay_bt");
    // cost(p1) + cost(p2) = 1100 > 1000
    auto r = check_enabled(net, m, bt, {{"o", obj("o1", "order")}, {"P", products({"p1", "p2"})}});
    CHECK(r.has(Reason::GuardFalse));
  }

  TEST_CASE("places in both pre- and postset keep their tokens") {
    const Net& net = fixtures::running_net();
    Run run = fixtures::running_run("run-optimal.json");
    Marking m = replay_from(net, prefix(run, 3), empty_marking(net)).final_marking;
    size_t bt = net.transition_index("pay_bt"), q5 = net.place_index("q5");
    Binding b{{"o", obj("o1", "order")}, {"P", products({"p1"})}};
    REQUIRE(enabled(net, m, bt, b));
    Marking m2 = fire(net, m, bt, b);
    CHECK(m2[q5] == m[q5]);
    CHECK(m2[q5].size() == 1);
    CHECK(m2[net.place_index("q3")].size() == 1);
    CHECK(m2[net.place_index("q2")].empty());
  }

  TEST_CASE("firing rule on random instances (property)") {
    std::mt19937_64 rng(11);
    size_t steps = 0;
    for (int inst = 0; inst < 300 && steps < 1500; ++inst) {
      auto I = testing::random_instance(rng);
      if (!I) continue;
      const Net& net = I->net;
      auto tgs = trace_graphs(I->log);
      if (tgs.empty()) continue;
      Bounds bd = compute_bounds(net, I->log, tgs[0], fixtures::small_bounds(I->max_len));
      Pools pools = make_pools(net, I->log, bd);
      Marking m;
      try {
        m = marking_of(net, net.initial[0]);
      } catch (const std::invalid_argument&) {
        continue;
      }
      SyntheticUse used;
      for (size_t depth = 0; depth < 5; ++depth) {
        std::vector<std::pair<size_t, Binding>> options;
        for (size_t t = 0; t < net.transitions.size(); ++t)
          for (auto& b : candidate_bindings(net, m, t, pools, used)) options.emplace_back(t, b);
        if (options.empty()) break;
        auto [t, b] = options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
        REQUIRE(enabled(net, m, t, b));
        Marking next = fire(net, m, t, b);
        ++steps;
        auto pre = net.preset(t), post = net.postset(t);
        for (size_t p = 0; p < net.places.size(); ++p) {
          std::set<Token> expect = m[p];
          if (pre.count(p) && !post.count(p))
            for (const auto& tok : instantiate_inscription(net, *net.in_flow(p, t), b)) {
              CHECK(expect.count(tok));
              expect.erase(tok);
            }
          if (post.count(p) && !pre.count(p))
            for (const auto& tok : instantiate_inscription(net, *net.out_flow(t, p), b)) expect.insert(tok);
          CHECK(next[p] == expect);
          for (const auto& tok : next[p]) {
            REQUIRE(tok.size() == net.places[p].color.size());
            for (size_t i = 0; i < tok.size(); ++i) CHECK(tok[i].type() == net.places[p].color[i]);
          }
        }
        // exact templates leave no token agreeing with the binding outside the list slot
        for (const auto& f : net.inputs[t]) {
          if (f.insc.template_class() != TemplateClass::ExactTemplate || post.count(f.place)) continue;
          int lp = f.insc.list_position();
          for (const auto& tok : next[f.place]) {
            bool agree = true;
            for (size_t i = 0; i < tok.size(); ++i)
              if (static_cast<int>(i) != lp) agree = agree && values_match(tok[i], b.at(f.insc.entries[i].name));
            CHECK_FALSE(agree);
          }
        }
        used = advance_use(used, pools, b);
        m = std::move(next);
      }
    }
    CHECK(steps >= 500);
  }
}
