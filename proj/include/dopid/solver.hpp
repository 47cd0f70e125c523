#pragma once

#include "dopid/encoder.hpp"
#include "dopid/sexpr.hpp"
#include "dopid/token_game.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dopid {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MinimizeMode { BranchAndBound, Native };

struct SolverConfig {
  std::string exe;                  // empty: $DOPID_SOLVER, then the build default
  std::vector<std::string> args;    // replaces the per-solver defaults when set
  double timeout = 60;              // seconds per query
  MinimizeMode mode = MinimizeMode::BranchAndBound;
  bool oneshot = false;             // one process and one file per probe
  std::optional<unsigned> seed;
  std::string emit_dir;             // oneshot problem files go here (default: a temp dir)
};

std::string default_solver();
std::string resolve_solver(const SolverConfig& cfg);

enum class SolveStatus { Sat, Unsat, Unknown };
const char* solve_status_name(SolveStatus s);

using SmtModel = std::map<std::string, SExpr>;

struct Exchange {
  std::string query;
  std::string response;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  SmtModel model;
  std::string reason;  // Unknown: timeout / solver message
  size_t queries = 0;
  std::vector<Exchange> transcript;
};

class ChildProcess;

// Incremental session with one solver process. Commands are streamed without
// waiting; check() reads up to the status line, so solver errors printed for
// earlier commands surface there.
class SolverSession {
 public:
  explicit SolverSession(const SolverConfig& cfg, std::vector<Exchange>* log = nullptr);
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  void send(const std::string& text);
  SolveStatus check(std::string* reason = nullptr);
  SmtModel values(const std::vector<SmtDecl>& decls);
  size_t queries() const { return queries_; }

 private:
  void flush(const std::string& resp);

  std::string exe_;
  std::unique_ptr<ChildProcess> proc_;
  std::chrono::milliseconds timeout_;
  std::vector<Exchange>* log_;
  std::string pending_;
  size_t queries_ = 0;
};

// A single check of the problem plus extra assertions.
SolveResult solve(const SmtProblem& p, const SolverConfig& cfg, const std::vector<std::string>& extra = {});

struct MinimizeResult {
  SolveStatus status = SolveStatus::Unknown;  // Sat once a model is known
  bool optimal = false;   // false: incumbent after an Unknown probe
  long long optimum = 0;  // objective value of model
  SmtModel model;
  std::string reason;
  size_t queries = 0;
  std::vector<long long> probes;  // bounds asserted, in order
  std::vector<Exchange> transcript;
};

// Least B with objective <= B satisfiable. The first unbounded model gives
// the upper bound; the search then bisects with push/pop scoped probes.
MinimizeResult minimize(const SmtProblem& p, const SolverConfig& cfg);

long long model_int(const SmtModel& m, const std::string& name);

// Satisfiability of a ground guard with uninterpreted functions, one solver
// query per call.
GuardOracle make_guard_oracle(const SolverConfig& cfg);

std::string transcript_text(const std::vector<Exchange>& t);

}  // namespace dopid
