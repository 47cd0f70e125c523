#include "dopid/decoder.hpp"

namespace dopid {

namespace {

Value object_at(const SmtProblem& p, long long code) {
  if (code < 1 || static_cast<size_t>(code) > p.universe.objects.size())
    throw DecodeError("object code " + std::to_string(code) + " outside the universe");
  return p.universe.objects[code - 1];
}

Value data_value(const Net& net, const SmtProblem& p, const Type& ty, const SExpr& e) {
  switch (ty.kind) {
    case BaseKind::Bool: return Value::boolean(sexpr_bool(e));
    case BaseKind::Int: return Value::integer(sexpr_integer(e));
    case BaseKind::Rat: return Value::rational(sexpr_rational(e));
    case BaseKind::String: {
      auto c = static_cast<int>(sexpr_integer(e));
      if (c < 1 || c > p.coder.symbol_count()) throw DecodeError("string code " + std::to_string(c) + " out of range");
      return Value::string(p.coder.symbol_at(c));
    }
    case BaseKind::FinSet: {
      auto c = static_cast<int>(sexpr_integer(e));
      if (c < 1 || c > p.coder.symbol_count()) throw DecodeError("finset code " + std::to_string(c) + " out of range");
      const auto& sym = p.coder.symbol_at(c);
      const auto& dom = net.registry.finset_domain(ty.name);
      if (std::find(dom.begin(), dom.end(), sym) == dom.end())
        throw DecodeError("'" + sym + "' is not an element of " + ty.name);
      return Value::finset(ty.name, sym);
    }
    case BaseKind::Object: break;
  }
  throw DecodeError("object type where data was expected");
}

}  // namespace

Run decode_run(const Net& net, const SmtProblem& p, const SmtModel& m) {
  Run run;
  for (size_t j = 1; j <= p.n; ++j) {
    long long t = model_int(m, SmtProblem::T(j));
    if (t == 0) break;
    if (t < 0 || static_cast<size_t>(t) > p.L) throw DecodeError("transition index " + std::to_string(t) + " out of range");
    const auto& lay = p.layouts[t - 1];
    Step s{static_cast<size_t>(t - 1), {}};
    for (const auto& [v, slot] : lay.scalars) s.binding[v] = object_at(p, model_int(m, SmtProblem::O(j, slot)));
    for (const auto& [v, slots] : lay.lists) {
      std::vector<Value> items;
      for (size_t slot : slots) {
        long long c = model_int(m, SmtProblem::O(j, slot));
        if (c == 0) break;
        items.push_back(object_at(p, c));
      }
      s.binding[v] = Value::list(net.var_type(v).element(), std::move(items));
    }
    for (const auto& x : net.data_vars(s.transition)) {
      auto it = m.find(p.D(j, x));
      if (it == m.end()) throw DecodeError("model has no value for " + p.D(j, x));
      s.binding[x] = data_value(net, p, net.var_type(x), it->second);
    }
    run.push_back(std::move(s));
  }
  return run;
}

std::vector<Op> decode_ops(const SmtProblem& p, const SmtModel& m, size_t run_len) {
  std::vector<Op> ops;
  size_t i = p.m, j = p.n;
  auto d = [&](size_t a, size_t b) { return model_int(m, SmtProblem::delta(a, b)); };
  while (i > 0 || j > 0) {
    long long cur = d(i, j);
    if (i > 0 && cur == p.log_penalties[i - 1] + d(i - 1, j)) {
      ops.push_back(Op::Log);
      --i;
    } else if (j > 0 && cur == model_int(m, SmtProblem::pm(j)) + d(i, j - 1)) {
      if (j <= run_len) ops.push_back(Op::Model);
      --j;
    } else if (i > 0 && j > 0 && cur == model_int(m, SmtProblem::pe(i, j)) + d(i - 1, j - 1)) {
      if (j > run_len) throw DecodeError("synchronous move on an idle step");
      ops.push_back(Op::Sync);
      --i;
      --j;
    } else {
      throw DecodeError("distance grid inconsistent at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

AlignmentGraph decode_alignment(const Net& net, const EventLog& log, const TraceGraph& tg, const SmtProblem& p,
                                const SmtModel& m, const Run& run) {
  auto ops = decode_ops(p, m, run.size());
  return build_alignment(net, trace_sequence(log, tg), tg, run, ops);
}

}  // namespace dopid
