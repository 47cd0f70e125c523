#pragma once

#include "dopid/alignment.hpp"
#include "dopid/enumerate.hpp"

namespace dopid {

struct OracleResult {
  size_t cost = 0;
  Run run;
  EditResult edit;
  AlignmentGraph alignment;
  size_t states = 0;
  bool fresh_exhausted = false;
};

// Minimum-cost alignment over all accepted runs of length <= max_run_len
// drawn from the pools. Throws std::runtime_error if there is none.
OracleResult brute_force_align(const Net& net, const EventLog& log, const TraceGraph& tg, size_t max_run_len,
                               const Pools& pools);

}  // namespace dopid
