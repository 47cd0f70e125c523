// dopid: validate models, replay runs, align logs, summarize logs.
#include "dopid/check.hpp"
#include "dopid/net_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace dopid;

namespace {

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

int cmd_validate(const std::string& model_path) {
  Net net = load_model_file(model_path);
  auto vs = validate_net(net);
  for (const auto& v : vs) std::cout << v.where << ": " << v.message << "\n";
  if (vs.empty()) std::cout << "ok\n";
  return vs.empty() ? 0 : 1;
}

int cmd_replay(const std::string& model_path, const std::string& run_path, const std::string& out,
               const std::string& solver) {
  Net net = load_model_file(model_path);
  Run run = load_run(net, parse_json_text(read_file(run_path), run_path));
  SolverConfig sc;
  sc.exe = solver;
  GuardOracle go = make_guard_oracle(sc);
  auto res = replay(net, run, &go);
  write_out(out, replay_to_json(net, run, res).dump(2) + "\n");
  if (res.accepted) {
    std::cerr << "Accepted\n";
  } else {
    std::cerr << "Rejected at step " << res.step;
    if (res.step < run.size()) std::cerr << " (" << net.transitions[run[res.step].transition].name << ")";
    std::cerr << ":";
    for (const auto& f : res.findings) std::cerr << " " << reason_name(f.reason);
    std::cerr << "\n";
  }
  return res.accepted ? 0 : 1;
}

int cmd_check(const std::string& model_path, const std::string& log_path, const CheckOptions& opts,
              const std::string& out, const std::string& transcript) {
  Net net = load_model_file(model_path);
  auto vs = validate_net(net);
  if (!vs.empty()) {
    for (const auto& v : vs) std::cerr << v.where << ": " << v.message << "\n";
    return 2;
  }
  EventLog log = load_log_file(log_path);
  auto rep = run_check(net, log, opts);
  write_out(out, check_report_to_json(net, rep).dump(2) + "\n");
  if (!transcript.empty()) {
    std::string text;
    for (const auto& c : rep.components) text += "; component " + std::to_string(c.index) + "\n" + c.transcript;
    write_out(transcript, text);
  }
  int code = 0;
  for (const auto& c : rep.components) {
    if (c.status == ComponentStatus::Error) {
      std::cerr << "component " << c.index << ": " << c.error << "\n";
      code = 2;
    } else if (c.status == ComponentStatus::Incumbent) {
      std::cerr << "component " << c.index << ": not proven optimal (" << c.error << ")\n";
      if (code == 0) code = 1;
    } else if (c.cost > 0 && code == 0) {
      code = 1;
    }
  }
  return code;
}

int cmd_stats(const std::string& log_path) {
  EventLog log = load_log_file(log_path);
  std::cout << log_stats(log).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformance checking for data-aware object-centric Petri nets with identifiers"};
  app.require_subcommand(1);

  std::string model, log_path, run_path, out = "-", solver, transcript;

  auto* validate = app.add_subcommand("validate", "Check a model document for well-formedness");
  validate->add_option("model", model, "Model JSON")->required();

  auto* rp = app.add_subcommand("replay", "Replay a run document on a model");
  rp->add_option("model", model, "Model JSON")->required();
  rp->add_option("run", run_path, "Run JSON")->required();
  rp->add_option("--out", out, "Report path, - for stdout");
  rp->add_option("--solver", solver, "SMT solver for guards with uninterpreted functions");

  CheckOptions opts;
  size_t max_run_len = 0, objects_extra = 0, list_capacity = 0;
  unsigned seed = 0;
  bool native = false;
  auto* check = app.add_subcommand("check", "Compute optimal alignments of a log against a model");
  check->add_option("model", model, "Model JSON")->required();
  check->add_option("log", log_path, "Event log JSON")->required();
  check->add_option("--solver", opts.solver.exe, "SMT solver executable (default: $DOPID_SOLVER or build default)");
  check->add_option("--max-run-len", max_run_len, "Run-length bound n (overrides the formula)");
  check->add_option("--objects-extra", objects_extra, "Synthetic object ids per type (default n)");
  check->add_option("--list-capacity", list_capacity, "Objects per list variable");
  check->add_flag("--oracle", opts.oracle, "Brute-force search instead of the solver");
  check->add_option("--timeout", opts.solver.timeout, "Seconds per solver query")->check(CLI::PositiveNumber);
  check->add_option("--out", out, "Report path, - for stdout");
  check->add_option("--jobs", opts.jobs, "Trace graphs aligned in parallel")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "Solver random seed");
  check->add_flag("--native", native, "Use the solver's minimize command (z3)");
  check->add_flag("--oneshot", opts.solver.oneshot, "One solver process per probe, via files");
  check->add_option("--emit-dir", opts.emit_dir, "Write the emitted problems here");
  check->add_option("--transcript", transcript, "Write the solver exchange here");
  check->add_flag("--pool-domains", opts.pool_domains, "Restrict free data values to the oracle's pools");

  auto* stats = app.add_subcommand("stats", "Summarize an event log");
  stats->add_option("log", log_path, "Event log JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(model);
    if (*rp) return cmd_replay(model, run_path, out, solver);
    if (*check) {
      if (max_run_len) opts.bounds.max_run_len = max_run_len;
      if (check->count("--objects-extra")) opts.bounds.objects_extra = objects_extra;
      if (list_capacity) opts.bounds.list_capacity = list_capacity;
      if (check->count("--seed")) opts.seed = seed;
      if (native) opts.solver.mode = MinimizeMode::Native;
      opts.keep_transcript = !transcript.empty();
      return cmd_check(model, log_path, opts, out, transcript);
    }
    if (*stats) return cmd_stats(log_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
