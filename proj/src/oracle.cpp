#include "dopid/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dopid {

namespace {

constexpr size_t kInf = std::numeric_limits<size_t>::max() / 4;

struct Search {
  const Net& net;
  const std::vector<const Event*>& events;
  const Pools& pools;
  std::vector<size_t> pl;
  size_t best = kInf;
  Run best_run;
  Run run;
  size_t states = 0;
  bool exhausted = false;
  // (marking, synthetic use) -> (remaining steps, column) pairs already explored
  std::map<std::pair<Marking, SyntheticUse>, std::vector<std::pair<size_t, std::vector<size_t>>>> seen;

  bool dominated(const Marking& m, const SyntheticUse& used, size_t remaining, const std::vector<size_t>& col) {
    auto& entries = seen[{m, used}];
    for (const auto& [r, c] : entries) {
      if (r < remaining) continue;
      bool le = true;
      for (size_t i = 0; le && i < col.size(); ++i) le = c[i] <= col[i];
      if (le) return true;
    }
    entries.emplace_back(remaining, col);
    return false;
  }

  std::vector<size_t> extend(const std::vector<size_t>& col, const Step& s) {
    size_t pm = model_penalty(net, s);
    std::vector<size_t> out(col.size());
    out[0] = col[0] + pm;
    for (size_t i = 1; i < col.size(); ++i) {
      size_t v = std::min(out[i - 1] + pl[i - 1], col[i] + pm);
      if (auto pe = sync_penalty(net, *events[i - 1], s)) v = std::min(v, col[i - 1] + *pe);
      out[i] = v;
    }
    return out;
  }

  void dfs(const Marking& m, const SyntheticUse& used, size_t remaining, const std::vector<size_t>& col) {
    ++states;
    if (*std::min_element(col.begin(), col.end()) >= best) return;
    for (const auto& f : net.final) {
      if (matches(net, m, f)) {
        if (col.back() < best) {
          best = col.back();
          best_run = run;
        }
        break;
      }
    }
    if (remaining == 0) return;
    if (dominated(m, used, remaining, col)) return;
    for (size_t t = 0; t < net.transitions.size(); ++t) {
      for (const auto& b : candidate_bindings(net, m, t, pools, used, &exhausted)) {
        Step s{t, b};
        auto next = extend(col, s);
        run.push_back(s);
        dfs(fire_unchecked(net, m, t, b), advance_use(used, pools, b), remaining - 1, next);
        run.pop_back();
      }
    }
  }
};

}  // namespace

OracleResult brute_force_align(const Net& net, const EventLog& log, const TraceGraph& tg, size_t max_run_len,
                               const Pools& pools) {
  auto events = trace_sequence(log, tg);
  Search s{net, events, pools, {}, kInf, {}, {}, 0, false, {}};
  for (const auto* e : events) s.pl.push_back(log_penalty(*e));
  std::vector<size_t> col0(events.size() + 1, 0);
  for (size_t i = 1; i <= events.size(); ++i) col0[i] = col0[i - 1] + s.pl[i - 1];
  for (const auto& spec : net.initial) {
    Marking m;
    try {
      m = marking_of(net, spec);
    } catch (const std::invalid_argument&) {
      continue;
    }
    s.dfs(m, {}, max_run_len, col0);
  }
  if (s.best == kInf)
    throw std::runtime_error("no accepted run within " + std::to_string(max_run_len) + " steps");
  OracleResult r;
  r.cost = s.best;
  r.run = s.best_run;
  r.edit = align_sequences(net, events, r.run);
  if (r.edit.cost != r.cost) throw std::logic_error("oracle cost and interleaving cost disagree");
  r.alignment = build_alignment(net, events, tg, r.run, r.edit.ops);
  r.states = s.states;
  r.fresh_exhausted = s.exhausted;
  return r;
}

}  // namespace dopid
