#pragma once

#include "dopid/check.hpp"
#include "dopid/net_io.hpp"

#include <doctest.h>

#include <string>

namespace fixtures {

inline std::string data(const std::string& rel) { return std::string(DOPID_DATA_DIR) + "/" + rel; }

inline const dopid::Net& running_net() {
  static dopid::Net net = dopid::load_model_file(data("running-example/model.json"));
  return net;
}

inline const dopid::EventLog& running_log() {
  static dopid::EventLog log = dopid::load_log_file(data("running-example/log.json"));
  return log;
}

inline dopid::Run running_run(const std::string& name) {
  return dopid::load_run(running_net(), dopid::parse_json_text(dopid::read_file(data("running-example/" + name)), name));
}

inline dopid::SolverConfig solver() {
  dopid::SolverConfig c;
  c.exe = DOPID_TEST_SOLVER;
  c.timeout = 120;
  return c;
}

// Bounds used throughout for the running example: n = 9, one synthetic id per type.
inline dopid::BoundsConfig small_bounds(size_t n = 9) {
  dopid::BoundsConfig b;
  b.max_run_len = n;
  b.objects_extra = 1;
  return b;
}

}  // namespace fixtures
