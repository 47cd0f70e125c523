#include "dopid/solver.hpp"

#include "dopid/process.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#ifndef DOPID_DEFAULT_SOLVER
#define DOPID_DEFAULT_SOLVER "z3"
#endif

namespace dopid {

std::string default_solver() {
  if (const char* env = std::getenv("DOPID_SOLVER"); env && *env) return env;
  return DOPID_DEFAULT_SOLVER;
}

std::string resolve_solver(const SolverConfig& cfg) { return cfg.exe.empty() ? default_solver() : cfg.exe; }

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

long long model_int(const SmtModel& m, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) throw SolverError("model has no value for " + name);
  return static_cast<long long>(sexpr_integer(it->second));
}

std::string transcript_text(const std::vector<Exchange>& t) {
  std::string out;
  for (const auto& x : t) {
    out += "; >>> query\n" + x.query;
    if (!x.query.empty() && x.query.back() != '\n') out += '\n';
    out += "; <<< response\n";
    for (size_t i = 0; i < x.response.size(); ++i) {
      if (i == 0 || x.response[i - 1] == '\n') out += "; ";
      out += x.response[i];
    }
    out += "\n";
  }
  return out;
}

namespace {

std::string basename_of(const std::string& exe) { return std::filesystem::path(exe).filename().string(); }

std::vector<std::string> interactive_args(const SolverConfig& cfg, const std::string& exe) {
  if (!cfg.args.empty()) return cfg.args;
  auto base = basename_of(exe);
  std::vector<std::string> a;
  if (base.rfind("z3", 0) == 0) {
    a = {"-in", "-smt2"};
    if (cfg.seed) a.push_back("smt.random_seed=" + std::to_string(*cfg.seed));
  } else if (base.rfind("yices", 0) == 0) {
    a = {"--incremental"};
  } else if (base.rfind("cvc", 0) == 0) {
    a = {"--incremental", "--lang=smt2"};
    if (cfg.seed) a.push_back("--seed=" + std::to_string(*cfg.seed));
  }
  return a;
}

std::vector<std::string> file_args(const SolverConfig& cfg, const std::string& exe, const std::string& file) {
  std::vector<std::string> a = cfg.args;
  if (a.empty()) {
    auto base = basename_of(exe);
    if (base.rfind("z3", 0) == 0 && cfg.seed) a.push_back("smt.random_seed=" + std::to_string(*cfg.seed));
    if (base.rfind("cvc", 0) == 0 && cfg.seed) a.push_back("--seed=" + std::to_string(*cfg.seed));
  } else {
    a.erase(std::remove(a.begin(), a.end(), "-in"), a.end());
  }
  a.push_back(file);
  return a;
}

std::chrono::milliseconds timeout_ms(const SolverConfig& cfg) {
  if (cfg.timeout <= 0) throw SolverError("solver timeout must be positive");
  return std::chrono::milliseconds(static_cast<long long>(cfg.timeout * 1000));
}

std::string get_value_command(const std::vector<SmtDecl>& decls) {
  std::string s = "(get-value (";
  for (size_t i = 0; i < decls.size(); ++i) {
    if (i) s += ' ';
    s += decls[i].name;
  }
  return s + "))\n";
}

SmtModel parse_model(const SExpr& e, const std::vector<SmtDecl>& decls) {
  if (e.is_atom) throw SolverError("expected a value list, got " + e.atom);
  SmtModel m;
  for (const auto& pair : e.items) {
    if (pair.is_atom || pair.items.size() != 2 || !pair.items[0].is_atom)
      throw SolverError("malformed get-value entry " + pair.str());
    m[pair.items[0].atom] = pair.items[1];
  }
  for (const auto& d : decls)
    if (!m.count(d.name)) throw SolverError("solver returned no value for " + d.name);
  return m;
}

bool is_error(const SExpr& e) { return !e.is_atom && !e.items.empty() && e.items[0].is("error"); }

// One fresh process on one problem file.
struct OneshotResult {
  SolveStatus status = SolveStatus::Unknown;
  SmtModel model;
  std::string reason;
};

OneshotResult run_file(const SolverConfig& cfg, const std::string& text, const std::vector<SmtDecl>& decls,
                       std::vector<Exchange>& log, size_t& queries, size_t probe) {
  namespace fs = std::filesystem;
  fs::path dir = cfg.emit_dir.empty() ? fs::temp_directory_path() / ("dopid-" + std::to_string(getpid())) : fs::path(cfg.emit_dir);
  fs::create_directories(dir);
  fs::path file = dir / ("probe-" + std::to_string(probe) + ".smt2");
  std::string full = text + "(check-sat)\n" + get_value_command(decls) + "(exit)\n";
  {
    std::ofstream out(file);
    out << full;
    if (!out) throw SolverError("cannot write " + file.string());
  }
  std::string exe = resolve_solver(cfg);
  ChildProcess proc(exe, file_args(cfg, exe, file.string()));
  proc.close_input();
  ++queries;
  auto all = proc.read_all(timeout_ms(cfg));
  OneshotResult r;
  if (!all) {
    log.push_back({"; file " + file.string() + "\n", "<timeout>"});
    r.reason = "timeout";
    return r;
  }
  log.push_back({"; file " + file.string() + "\n", *all});
  auto exprs = parse_sexprs(*all);
  for (size_t i = 0; i < exprs.size(); ++i) {
    const auto& e = exprs[i];
    if (e.is("sat")) {
      if (i + 1 >= exprs.size()) throw SolverError("solver printed no model");
      r.status = SolveStatus::Sat;
      r.model = parse_model(exprs[i + 1], decls);
      return r;
    }
    if (e.is("unsat")) {
      r.status = SolveStatus::Unsat;
      return r;
    }
    if (e.is("unknown")) {
      r.reason = "solver answered unknown";
      return r;
    }
    if (is_error(e)) throw SolverError("solver error: " + e.str());
  }
  throw SolverError("solver printed no status");
}

std::string bound_assertion(const SmtProblem& p, long long b) {
  return "(assert (<= " + p.objective() + " " + std::to_string(b) + "))\n";
}

}  // namespace

SolverSession::SolverSession(const SolverConfig& cfg, std::vector<Exchange>* log)
    : exe_(resolve_solver(cfg)),
      proc_(std::make_unique<ChildProcess>(exe_, interactive_args(cfg, exe_))),
      timeout_(timeout_ms(cfg)),
      log_(log) {}

SolverSession::~SolverSession() = default;

void SolverSession::send(const std::string& text) {
  pending_ += text;
  proc_->write(text);
}

void SolverSession::flush(const std::string& resp) {
  if (log_) log_->push_back({pending_, resp});
  pending_.clear();
}

SolveStatus SolverSession::check(std::string* reason) {
  send("(check-sat)\n");
  ++queries_;
  std::string resp;
  while (true) {
    auto r = proc_->read_expr(timeout_);
    if (!r) {
      flush(resp + "<timeout>");
      proc_->kill();
      if (reason) *reason = "timeout";
      return SolveStatus::Unknown;
    }
    resp += *r + "\n";
    SExpr e = parse_sexpr(*r);
    if (e.is("sat") || e.is("unsat") || e.is("unknown")) {
      flush(resp);
      if (e.is("sat")) return SolveStatus::Sat;
      if (e.is("unsat")) return SolveStatus::Unsat;
      if (reason) *reason = "solver answered unknown";
      return SolveStatus::Unknown;
    }
    if (is_error(e)) {
      flush(resp);
      throw SolverError("solver error: " + *r);
    }
  }
}

SmtModel SolverSession::values(const std::vector<SmtDecl>& decls) {
  send(get_value_command(decls));
  auto r = proc_->read_expr(timeout_);
  if (!r) {
    flush("<timeout>");
    throw SolverError("timeout while reading the model");
  }
  flush(*r + "\n");
  SExpr e = parse_sexpr(*r);
  if (is_error(e)) throw SolverError("solver error: " + *r);
  return parse_model(e, decls);
}

SolveResult solve(const SmtProblem& p, const SolverConfig& cfg, const std::vector<std::string>& extra) {
  SolveResult res;
  std::string text = emit(p, false);
  for (const auto& a : extra) text += a + "\n";
  if (cfg.oneshot) {
    auto r = run_file(cfg, text, p.decls, res.transcript, res.queries, 0);
    res.status = r.status;
    res.model = std::move(r.model);
    res.reason = r.reason;
    return res;
  }
  SolverSession s(cfg, &res.transcript);
  s.send(text);
  res.status = s.check(&res.reason);
  if (res.status == SolveStatus::Sat) res.model = s.values(p.decls);
  res.queries = s.queries();
  return res;
}

MinimizeResult minimize(const SmtProblem& p, const SolverConfig& cfg) {
  MinimizeResult res;
  const std::string obj = p.objective();
  const std::string base = emit(p, false);

  if (cfg.mode == MinimizeMode::Native) {
    SolverSession s(cfg, &res.transcript);
    s.send(base + "(minimize " + obj + ")\n");
    res.status = s.check(&res.reason);
    if (res.status == SolveStatus::Sat) {
      res.model = s.values(p.decls);
      res.optimum = model_int(res.model, obj);
      res.optimal = true;
    }
    res.queries = s.queries();
    return res;
  }

  auto accept = [&](SmtModel m) {
    res.status = SolveStatus::Sat;
    res.model = std::move(m);
    res.optimum = model_int(res.model, obj);
  };

  if (cfg.oneshot) {
    size_t probe = 0;
    auto r = run_file(cfg, base, p.decls, res.transcript, res.queries, probe++);
    if (r.status != SolveStatus::Sat) {
      res.status = r.status;
      res.reason = r.reason;
      return res;
    }
    accept(std::move(r.model));
    long long lo = 0, hi = res.optimum;
    while (lo < hi) {
      long long mid = lo + (hi - lo) / 2;
      res.probes.push_back(mid);
      auto q = run_file(cfg, base + bound_assertion(p, mid), p.decls, res.transcript, res.queries, probe++);
      if (q.status == SolveStatus::Sat) {
        accept(std::move(q.model));
        hi = res.optimum;
      } else if (q.status == SolveStatus::Unsat) {
        lo = mid + 1;
      } else {
        res.reason = q.reason;
        return res;
      }
    }
    res.optimal = true;
    return res;
  }

  SolverSession s(cfg, &res.transcript);
  auto bisect = [&] {
    s.send(base);
    auto st = s.check(&res.reason);
    if (st != SolveStatus::Sat) {
      res.status = st;
      return;
    }
    accept(s.values(p.decls));
    long long lo = 0, hi = res.optimum;
    while (lo < hi) {
      long long mid = lo + (hi - lo) / 2;
      res.probes.push_back(mid);
      s.send("(push 1)\n" + bound_assertion(p, mid));
      auto q = s.check(&res.reason);
      if (q == SolveStatus::Sat) {
        accept(s.values(p.decls));
        hi = res.optimum;
      } else if (q == SolveStatus::Unsat) {
        lo = mid + 1;
      } else {
        return;
      }
      s.send("(pop 1)\n");
    }
    res.optimal = true;
  };
  bisect();
  res.queries = s.queries();
  return res;
}

namespace {

void collect_literals(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::StrLit) out.insert(e.literal.symbol());
  for (const auto& a : e.args) collect_literals(*a, out);
}

}  // namespace

GuardOracle make_guard_oracle(const SolverConfig& cfg) {
  return [cfg](const Net& net, size_t t, const Binding& b) -> bool {
    const auto& tr = net.transitions.at(t);
    if (!tr.guard) return true;
    std::set<std::string> symbols{"#other"};
    std::set<std::string> objects;
    collect_literals(*tr.guard, symbols);
    for (const auto& [name, dom] : net.registry.finsets()) symbols.insert(dom.begin(), dom.end());
    for (const auto& [name, sig] : net.registry.functions())
      if (sig.table)
        for (const auto& [key, v] : *sig.table) {
          for (const auto& x : key)
            if (x.is_str() || x.is_finset()) symbols.insert(x.symbol());
          if (v.is_str() || v.is_finset()) symbols.insert(v.symbol());
        }
    auto note = [&](const Value& v) {
      if (v.is_str() || v.is_finset()) symbols.insert(v.symbol());
      if (v.is_object()) objects.insert(v.as_object().id);
    };
    for (const auto& [x, v] : b) {
      note(v);
      if (v.is_list())
        for (const auto& i : v.as_list().items) note(i);
    }
    ValueCoder coder(symbols, {objects.begin(), objects.end()});
    VarMap vm;
    for (const auto& [x, v] : b) {
      if (v.is_list()) {
        auto& slots = vm.lists[x];
        for (const auto& i : v.as_list().items) slots.push_back(coder.literal(i));
      } else {
        vm.scalars[x] = coder.literal(v);
      }
    }
    std::string text = "(set-logic QF_UFLIRA)\n";
    for (const auto& l : function_declarations(net.registry, coder)) text += l + "\n";
    text += "(assert " + lower_to_smt(*tr.guard, vm, coder, net.registry) + ")\n";
    SolverSession s(cfg);
    s.send(text);
    std::string reason;
    auto st = s.check(&reason);
    if (st == SolveStatus::Unknown) throw SolverError("guard query for '" + tr.name + "': " + reason);
    return st == SolveStatus::Sat;
  };
}

}  // namespace dopid
