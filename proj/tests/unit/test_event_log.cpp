#include "common.hpp"

using namespace dopid;

TEST_SUITE("event-log") {
  TEST_CASE("the running log forms one trace graph") {
    const EventLog& log = fixtures::running_log();
    auto tgs = trace_graphs(log);
    REQUIRE(tgs.size() == 1);
    const auto& tg = tgs[0];
    CHECK(tg.events == std::vector<std::string>{"e0", "e1", "e2", "e3"});
    CHECK(tg.objects == std::set<std::string>{"o1", "p1", "p2"});
    // direct succession per object: o1 e0 e1 e2 e3, p1 e0 e2 e3, p2 e0
    std::set<std::pair<std::string, std::string>> edges{{"e0", "e1"}, {"e1", "e2"}, {"e2", "e3"}, {"e0", "e2"}};
    CHECK(tg.edges == edges);
    // 3 + 1 + 2 + 2 object occurrences
    CHECK(tg.object_occurrences(log) == 8);
  }

  TEST_CASE("attributes and object types") {
    const EventLog& log = fixtures::running_log();
    const Event& e3 = log.event("e3");
    CHECK(e3.activity == "ship");
    CHECK(e3.attrs.at("d") == Value::integer(3));
    CHECK(e3.attrs.at("s") == Value::string("truck"));
    CHECK(log.objects.at("p2") == "product");
    CHECK(trace_of_object(log, "p1") == std::vector<std::string>{"e0", "e2", "e3"});
  }

  TEST_CASE("components follow the object graph") {
    Json doc = {{"objects", {{"a", "t"}, {"b", "t"}, {"c", "t"}}},
                {"events",
                 {{{"id", "x"}, {"activity", "A"}, {"objects", {"a"}}, {"time", 1}},
                  {{"id", "y"}, {"activity", "B"}, {"objects", {"b", "c"}}, {"time", 2}},
                  {{"id", "z"}, {"activity", "C"}, {"objects", {"a"}}, {"time", 3}}}}};
    EventLog log = load_log(doc);
    auto tgs = trace_graphs(log);
    REQUIRE(tgs.size() == 2);
    CHECK(tgs[0].events == std::vector<std::string>{"x", "z"});
    CHECK(tgs[1].events == std::vector<std::string>{"y"});
    CHECK(tgs[1].edges.empty());
    auto st = log_stats(log);
    CHECK(st["components"] == 2);
  }

  TEST_CASE("stats of the running log") {
    auto st = log_stats(fixtures::running_log());
    CHECK(st["events"] == 4);
    CHECK(st["objects"] == 3);
    CHECK(st["components"] == 1);
    CHECK(st["per_component"][0]["m"] == 8);
    CHECK(st["per_component"][0]["events"] == 4);
  }

  TEST_CASE("empty log") {
    EventLog log = load_log(Json{{"objects", Json::object()}, {"events", Json::array()}});
    CHECK(trace_graphs(log).empty());
    auto st = log_stats(log);
    CHECK(st["events"] == 0);
    CHECK(st["components"] == 0);
  }

  TEST_CASE("malformed logs are rejected") {
    CHECK_THROWS(load_log(Json{{"objects", {{"a", "t"}}},
                               {"events", {{{"id", "x"}, {"activity", "A"}, {"objects", {"zz"}}, {"time", 1}}}}}));
    CHECK_THROWS(load_log(Json{{"objects", {{"a", "t"}}},
                               {"events",
                                {{{"id", "x"}, {"activity", "A"}, {"objects", {"a"}}, {"time", 1}},
                                 {{"id", "x"}, {"activity", "B"}, {"objects", {"a"}}, {"time", 2}}}}}));
  }
}
