#pragma once

#include "dopid/alignment.hpp"
#include "dopid/solver.hpp"

namespace dopid {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Steps 1..n up to the first idle step, bindings read from the slots and
// the data variables.
Run decode_run(const Net& net, const SmtProblem& p, const SmtModel& m);

// Backtracks the distance grid from (m, n). Ties prefer a log move, then a
// model move, then a synchronous move; idle steps are dropped.
std::vector<Op> decode_ops(const SmtProblem& p, const SmtModel& m, size_t run_len);

AlignmentGraph decode_alignment(const Net& net, const EventLog& log, const TraceGraph& tg, const SmtProblem& p,
                                const SmtModel& m, const Run& run);

}  // namespace dopid
