// Acceptance suite: one PASS/FAIL line per criterion.
//   dopid_acceptance [--criterion N]...
#include "dopid/check.hpp"
#include "dopid/decoder.hpp"
#include "dopid/net_io.hpp"
#include "dopid/oracle.hpp"
#include "generators.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dopid;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr size_t kExpectedCost = 11;
constexpr double kRuntimeEnvelope = 10.0;  // seconds
constexpr size_t kEquivalenceInstances = 200;  // minimum
constexpr size_t kGuardCases = 1000;
constexpr size_t kMaxObjects = 4;
constexpr size_t kPoolLimit = 3;
constexpr size_t kRunningExampleBound = 9;
constexpr unsigned kSeed = 20240601;

size_t g_instances = kEquivalenceInstances;

std::string data(const std::string& rel) { return std::string(DOPID_DATA_DIR) + "/" + rel; }

SolverConfig solver() {
  SolverConfig c;
  c.exe = DOPID_TEST_SOLVER;
  c.timeout = 120;
  return c;
}

BoundsConfig running_bounds() {
  BoundsConfig b;
  b.max_run_len = kRunningExampleBound;
  b.objects_extra = 1;
  return b;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

void report(int n, const std::string& what, const Verdict& v) {
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << n << "] " << what << ": " << v.detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criterion 1 --------------------------------------------------------------

Verdict running_optimum() {
  Net net = load_model_file(data("running-example/model.json"));
  EventLog log = load_log_file(data("running-example/log.json"));
  CheckOptions o;
  o.bounds = running_bounds();
  o.solver = solver();
  auto t0 = std::chrono::steady_clock::now();
  auto r = run_check(net, log, o);
  double secs = seconds_since(t0);
  std::ostringstream d;
  if (r.components.size() != 1 || r.components[0].status != ComponentStatus::Optimal) {
    d << "no optimal alignment";
    if (!r.components.empty()) d << " (" << r.components[0].error << ")";
    return {false, d.str()};
  }
  const auto& c = r.components[0];
  std::multiset<std::pair<std::string, size_t>> costly;
  size_t silent = 0;
  for (const auto& mv : c.alignment.moves) {
    size_t k = move_cost(mv);
    if (k) costly.emplace(move_kind_name(mv.kind()), k);
    if (mv.kind() == MoveKind::Model && !mv.model->label) ++silent;
  }
  std::multiset<std::pair<std::string, size_t>> want{{"log", 4}, {"model", 2}, {"model", 5}};
  bool moves_ok = costly == want && silent == 3;
  d << "cost " << r.total_cost << " (expected " << kExpectedCost << "), costly moves {";
  bool first = true;
  for (const auto& [k, v] : costly) {
    d << (first ? "" : ", ") << k << ":" << v;
    first = false;
  }
  d << "}, " << silent << " silent, " << secs << " s";
  return {r.total_cost == kExpectedCost && moves_ok && secs < kRuntimeEnvelope, d.str()};
}

// Criteria 2 to 4 and 7 share one pass over random instances ----------------

struct SuiteStats {
  size_t instances = 0, skipped = 0, both_none = 0;
  size_t cost_mismatch = 0;
  size_t sat_models = 0, replay_failures = 0;
  size_t optimal_models = 0, objective_mismatch = 0;
  size_t bound_checked = 0, bound_violations = 0;
  std::map<int, std::vector<std::string>> notes;  // by criterion
};

void note(SuiteStats& s, int criterion, const std::string& msg) {
  auto& v = s.notes[criterion];
  if (v.size() < 5) v.push_back(msg);
}

// Decodes a Sat model and checks the replay and objective properties.
void audit_model(SuiteStats& s, const Net& net, const EventLog& log, const TraceGraph& tg, const SmtProblem& p,
                 const MinimizeResult& r, const std::string& tag) {
  ++s.sat_models;
  Run run;
  try {
    run = decode_run(net, p, r.model);
  } catch (const std::exception& e) {
    ++s.replay_failures;
    note(s, 3, tag + ": decode failed: " + e.what());
    return;
  }
  if (!replay(net, run).accepted) {
    ++s.replay_failures;
    note(s, 3, tag + ": decoded run rejected");
  }
  if (!r.optimal) return;
  ++s.optimal_models;
  try {
    auto g = decode_alignment(net, log, tg, p, r.model, run);
    if (static_cast<long long>(alignment_cost(g)) != r.optimum || !validate_alignment(g, tg, log, net).valid()) {
      ++s.objective_mismatch;
      note(s, 4, tag + ": decoded alignment cost " + std::to_string(alignment_cost(g)) + " vs objective " +
                  std::to_string(r.optimum));
    }
  } catch (const std::exception& e) {
    ++s.objective_mismatch;
    note(s, 4, tag + ": " + e.what());
  }
}

SuiteStats& suite() {
  static std::optional<SuiteStats> cached;
  if (cached) return *cached;
  SuiteStats s;
  SolverConfig sc = solver();

  // the running example
  {
    Net net = load_model_file(data("running-example/model.json"));
    EventLog log = load_log_file(data("running-example/log.json"));
    auto tg = trace_graphs(log).at(0);
    Bounds b = compute_bounds(net, log, tg, running_bounds());
    SmtProblem p = encode(net, log, tg, b);
    auto r = minimize(p, sc);
    if (r.status == SolveStatus::Sat) audit_model(s, net, log, tg, p, r, "running example");
  }

  std::mt19937_64 rng(kSeed);
  while (s.instances < g_instances) {
    auto I = testing::random_instance(rng);
    if (!I) continue;
    auto tgs = trace_graphs(I->log);
    if (tgs.empty()) continue;
    const TraceGraph& tg = tgs[0];
    BoundsConfig cfg;
    cfg.max_run_len = I->max_len;
    cfg.objects_extra = 1;
    Bounds b = compute_bounds(I->net, I->log, tg, cfg);
    if (b.universe.objects.size() > kMaxObjects) {
      ++s.skipped;
      continue;
    }
    Pools pools = make_pools(I->net, I->log, b);
    for (auto& [var, vals] : pools.values)
      if (vals.size() > kPoolLimit) vals.resize(kPoolLimit);

    std::string tag = "instance " + std::to_string(s.instances);
    ++s.instances;
    std::optional<OracleResult> oracle;
    try {
      oracle = brute_force_align(I->net, I->log, tg, b.n, pools);
    } catch (const std::runtime_error&) {
    }

    EncodeOptions eo;
    eo.value_domains = pools.values;
    SmtProblem p;
    try {
      p = encode(I->net, I->log, tg, b, eo);
    } catch (const EncodeError& e) {
      ++s.cost_mismatch;
      note(s, 2, tag + ": encode failed: " + e.what());
      continue;
    }
    auto r = minimize(p, sc);
    if (r.status == SolveStatus::Unknown) {
      ++s.cost_mismatch;
      note(s, 2, tag + ": solver gave up: " + r.reason);
      continue;
    }
    if (!oracle) {
      if (r.status == SolveStatus::Unsat) {
        ++s.both_none;
      } else {
        ++s.cost_mismatch;
        note(s, 2, tag + ": oracle found no run, solver cost " + std::to_string(r.optimum));
      }
    } else if (r.status != SolveStatus::Sat || !r.optimal || r.optimum != static_cast<long long>(oracle->cost)) {
      ++s.cost_mismatch;
      note(s, 2, tag + ": oracle " + std::to_string(oracle->cost) + ", solver " +
                  (r.status == SolveStatus::Sat ? std::to_string(r.optimum) : solve_status_name(r.status)));
    }
    if (r.status == SolveStatus::Sat) audit_model(s, I->net, I->log, tg, p, r, tag);

    if (oracle) {
      try {
        Bounds full = compute_bounds(I->net, I->log, tg, {});
        ++s.bound_checked;
        if (oracle->run.size() > full.n_formula) {
          ++s.bound_violations;
          note(s, 7, tag + ": run length " + std::to_string(oracle->run.size()) + " > " + std::to_string(full.n_formula));
        }
      } catch (const std::runtime_error&) {
        // silent cycle: no formula bound
      }
    }
  }
  cached = std::move(s);
  return *cached;
}

std::string notes_of(const SuiteStats& s, int criterion) {
  std::string out;
  auto it = s.notes.find(criterion);
  if (it != s.notes.end())
    for (const auto& n : it->second) out += "; " + n;
  return out;
}

Verdict oracle_equivalence() {
  auto& s = suite();
  std::ostringstream d;
  d << s.instances << " instances (" << s.both_none << " without any run, " << s.skipped
    << " skipped for size), " << s.cost_mismatch << " mismatches" << notes_of(s, 2);
  return {s.instances >= kEquivalenceInstances && s.cost_mismatch == 0, d.str()};
}

Verdict decode_replay() {
  auto& s = suite();
  std::ostringstream d;
  d << s.sat_models << " models decoded, " << s.replay_failures << " rejected" << notes_of(s, 3);
  return {s.sat_models > 0 && s.replay_failures == 0, d.str()};
}

Verdict objective_faithful() {
  auto& s = suite();
  std::ostringstream d;
  d << s.optimal_models << " optimal models, " << s.objective_mismatch << " mismatches" << notes_of(s, 4);
  return {s.optimal_models > 0 && s.objective_mismatch == 0, d.str()};
}

Verdict bound_sanity() {
  auto& s = suite();
  std::ostringstream d;
  d << s.bound_checked << " oracle optima checked, " << s.bound_violations << " longer than the bound" << notes_of(s, 7);
  return {s.bound_checked > 0 && s.bound_violations == 0, d.str()};
}

// Criterion 5 --------------------------------------------------------------

Verdict guard_agreement() {
  auto w = testing::guard_world();
  std::mt19937_64 rng(kSeed);
  SolverSession session(solver());
  session.send(testing::guard_prelude(w));
  size_t agree = 0, truths = 0;
  std::string first_bad;
  for (size_t i = 0; i < kGuardCases; ++i) {
    auto c = testing::random_guard(rng, w);
    bool want = testing::evaluate_strict(*c.expr, c.binding, w.registry);
    truths += want;
    session.send("(push 1)\n" + testing::guard_query(w, c, rng));
    auto st = session.check();
    session.send("(pop 1)\n");
    bool got = st == SolveStatus::Sat;
    if (st != SolveStatus::Unknown && got == want)
      ++agree;
    else if (first_bad.empty())
      first_bad = "; first disagreement: " + print(*c.expr);
  }
  std::ostringstream d;
  d << agree << "/" << kGuardCases << " agree (" << truths << " true)" << first_bad;
  return {agree == kGuardCases, d.str()};
}

// Criterion 6 --------------------------------------------------------------

Verdict exact_sync() {
  Net net = load_model_file(data("running-example/model.json"));
  auto run_of = [&](const std::string& f) {
    return load_run(net, parse_json_text(read_file(data("running-example/" + f)), f));
  };
  Run literal = run_of("run-literal.json");
  auto a = replay(net, literal);
  auto b = replay(net, run_of("run-fixed.json"));
  bool max = false, guard = false;
  for (const auto& f : a.findings) {
    max = max || f.reason == Reason::Maximality;
    guard = guard || f.reason == Reason::GuardFalse;
  }
  bool at_ship = !a.accepted && a.step < literal.size() && net.transitions[literal[a.step].transition].name == "ship";
  std::ostringstream d;
  d << "literal " << (a.accepted ? "accepted" : "rejected at step " + std::to_string(a.step)) << " (maximality "
    << max << ", guard " << guard << "), fixed " << (b.accepted ? "accepted" : "rejected");
  return {at_ship && max && guard && b.accepted, d.str()};
}

// Criterion 8 --------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  fs::path root = fs::temp_directory_path() / ("dopid-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<fs::path> dirs{root / "a", root / "b"};
  std::vector<int> codes;
  for (const auto& d : dirs) {
    fs::create_directories(d);
    std::string cmd = std::string("\"") + DOPID_CLI + "\" check \"" + data("running-example/model.json") + "\" \"" +
                      data("running-example/log.json") + "\" --solver \"" + DOPID_TEST_SOLVER +
                      "\" --max-run-len 9 --objects-extra 1 --seed 7 --emit-dir \"" + d.string() + "\" --out \"" +
                      (d / "report.json").string() + "\" 2>/dev/null";
    int rc = std::system(cmd.c_str());
    codes.push_back(WIFEXITED(rc) ? WEXITSTATUS(rc) : -1);
  }
  std::vector<std::string> files{"report.json", "component-0.smt2"};
  bool same = true;
  for (const auto& f : files) {
    std::string x = slurp(dirs[0] / f), y = slurp(dirs[1] / f);
    same = same && !x.empty() && x == y;
  }
  fs::remove_all(root);
  bool ran = codes[0] == codes[1] && (codes[0] == 0 || codes[0] == 1);
  std::ostringstream d;
  d << "exit codes " << codes[0] << "/" << codes[1] << ", report and problem " << (same ? "identical" : "differ");
  return {ran && same, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> which;
  app.add_option("--criterion", which, "Criteria to run (default: all)")->check(CLI::Range(1, 8));
  app.add_option("--instances", g_instances, "Random instances for criteria 2, 3, 4 and 7")
      ->check(CLI::Range(kEquivalenceInstances, size_t(1) << 20));
  CLI11_PARSE(app, argc, argv);
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8};

  bool all = true;
  for (int n : which) {
    Verdict v;
    std::string what;
    try {
      switch (n) {
        case 1: what = "running-example optimum"; v = running_optimum(); break;
        case 2: what = "oracle equivalence"; v = oracle_equivalence(); break;
        case 3: what = "decode-replay"; v = decode_replay(); break;
        case 4: what = "objective faithfulness"; v = objective_faithful(); break;
        case 5: what = "guard semantics agreement"; v = guard_agreement(); break;
        case 6: what = "exact synchronization"; v = exact_sync(); break;
        case 7: what = "bound formula"; v = bound_sanity(); break;
        case 8: what = "determinism"; v = determinism(); break;
      }
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    report(n, what, v);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
