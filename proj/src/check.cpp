#include "dopid/check.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

namespace dopid {

const char* component_status_name(ComponentStatus s) {
  switch (s) {
    case ComponentStatus::Optimal: return "optimal";
    case ComponentStatus::Incumbent: return "incumbent";
    case ComponentStatus::Error: return "error";
  }
  return "?";
}

bool CheckReport::ok() const {
  for (const auto& c : components)
    if (c.status != ComponentStatus::Optimal) return false;
  return true;
}

namespace {

void finish(const Net& net, const std::vector<const Event*>& events, ComponentReport& r) {
  size_t denom = 0;
  for (const auto* e : events) denom += log_penalty(*e);
  for (const auto& s : r.run) denom += model_penalty(net, s);
  r.trivial_cost = denom;
  r.fitness = denom ? 1.0 - static_cast<double>(r.cost) / static_cast<double>(denom) : 1.0;
}

}  // namespace

ComponentReport check_component(const Net& net, const EventLog& log, const TraceGraph& tg, size_t index,
                                const CheckOptions& opts) {
  ComponentReport r;
  r.index = index;
  r.events = tg.events;
  r.objects.assign(tg.objects.begin(), tg.objects.end());
  auto events = trace_sequence(log, tg);
  try {
    r.bounds = compute_bounds(net, log, tg, opts.bounds);
    Pools pools = make_pools(net, log, r.bounds);

    if (opts.oracle) {
      auto o = brute_force_align(net, log, tg, r.bounds.n, pools);
      r.cost = o.cost;
      r.run = o.run;
      r.alignment = o.alignment;
      r.oracle_states = o.states;
      r.replay_accepted = replay(net, r.run).accepted;
      r.status = ComponentStatus::Optimal;
      finish(net, events, r);
      return r;
    }

    EncodeOptions eo;
    if (opts.pool_domains) eo.value_domains = pools.values;
    SmtProblem p = encode(net, log, tg, r.bounds, eo);
    if (!opts.emit_dir.empty()) {
      std::filesystem::create_directories(opts.emit_dir);
      std::ofstream out(std::filesystem::path(opts.emit_dir) / ("component-" + std::to_string(index) + ".smt2"));
      out << emit(p);
    }
    SolverConfig sc = opts.solver;
    if (opts.seed && !sc.seed) sc.seed = opts.seed;
    if (sc.oneshot && sc.emit_dir.empty() && !opts.emit_dir.empty())
      sc.emit_dir = (std::filesystem::path(opts.emit_dir) / ("component-" + std::to_string(index))).string();
    auto res = minimize(p, sc);
    r.queries = res.queries;
    r.probes = res.probes;
    if (opts.keep_transcript) r.transcript = transcript_text(res.transcript);
    if (res.status == SolveStatus::Unsat) {
      r.error = "no accepted run within " + std::to_string(r.bounds.n) + " steps; raise --max-run-len";
      return r;
    }
    if (res.status != SolveStatus::Sat) {
      r.error = "solver gave no model: " + res.reason;
      return r;
    }
    r.run = decode_run(net, p, res.model);
    r.alignment = decode_alignment(net, log, tg, p, res.model, r.run);
    r.cost = alignment_cost(r.alignment);
    GuardOracle go = make_guard_oracle(sc);
    r.replay_accepted = replay(net, r.run, &go).accepted;
    if (r.cost != static_cast<size_t>(res.optimum) || !r.replay_accepted) {
      r.error = "decoded alignment inconsistent with the solver model (cost " + std::to_string(r.cost) +
                " vs objective " + std::to_string(res.optimum) + ", replay " +
                (r.replay_accepted ? "accepted" : "rejected") + ")";
      return r;
    }
    r.status = res.optimal ? ComponentStatus::Optimal : ComponentStatus::Incumbent;
    if (!res.optimal) r.error = res.reason;
    finish(net, events, r);
  } catch (const std::exception& e) {
    r.status = ComponentStatus::Error;
    r.error = e.what();
  }
  return r;
}

CheckReport run_check(const Net& net, const EventLog& log, const CheckOptions& opts) {
  CheckReport rep;
  rep.method = opts.oracle ? "oracle" : "smt";
  auto tgs = trace_graphs(log);
  rep.components.resize(tgs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < tgs.size();) rep.components[i] = check_component(net, log, tgs[i], i, opts);
  };
  size_t jobs = std::max<size_t>(1, std::min(opts.jobs, tgs.size()));
  std::vector<std::thread> pool;
  for (size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  size_t denom = 0;
  for (const auto& c : rep.components) {
    rep.total_cost += c.cost;
    denom += c.trivial_cost;
  }
  rep.fitness = denom ? 1.0 - static_cast<double>(rep.total_cost) / static_cast<double>(denom) : 1.0;
  return rep;
}

Json check_report_to_json(const Net& net, const CheckReport& r) {
  Json comps = Json::array();
  for (const auto& c : r.components) {
    Json j;
    j["index"] = c.index;
    j["events"] = c.events;
    j["objects"] = c.objects;
    std::vector<std::string> universe;
    for (const auto& o : c.bounds.universe.objects) universe.push_back(o.as_object().id);
    j["bounds"] = {{"events", c.bounds.events},   {"m", c.bounds.m},
                   {"c", c.bounds.c},             {"c_from_witness", c.bounds.c_from_witness},
                   {"k", c.bounds.k},             {"nu", c.bounds.nu},
                   {"n_formula", c.bounds.n_formula}, {"n", c.bounds.n},
                   {"list_capacity", c.bounds.capacity}, {"universe", universe}};
    j["status"] = component_status_name(c.status);
    if (!c.error.empty()) j["error"] = c.error;
    if (c.status != ComponentStatus::Error) {
      j["cost"] = c.cost;
      j["trivial_cost"] = c.trivial_cost;
      j["fitness"] = c.fitness;
      j["run"] = run_to_json(net, c.run);
      j["replay"] = c.replay_accepted ? "accepted" : "rejected";
      j["alignment"] = alignment_to_json(net, c.alignment);
    }
    if (r.method == "smt")
      j["solver"] = {{"queries", c.queries}, {"probes", c.probes}};
    else
      j["oracle"] = {{"states", c.oracle_states}};
    comps.push_back(std::move(j));
  }
  return {{"method", r.method}, {"components", comps}, {"total_cost", r.total_cost}, {"fitness", r.fitness},
          {"ok", r.ok()}};
}

Json log_stats(const EventLog& log) {
  auto tgs = trace_graphs(log);
  Json comps = Json::array();
  for (const auto& tg : tgs)
    comps.push_back({{"events", tg.events.size()}, {"objects", tg.objects.size()}, {"m", tg.object_occurrences(log)}});
  return {{"events", log.events.size()}, {"objects", log.objects.size()}, {"components", tgs.size()},
          {"per_component", comps}};
}

}  // namespace dopid
