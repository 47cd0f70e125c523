#pragma once

#include "dopid/bounds.hpp"
#include "dopid/lower.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dopid {

class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Object slots of one transition: scalar object variables first (by name),
// then one block of `capacity` slots per list variable.
struct SlotLayout {
  std::map<std::string, size_t> scalars;              // var -> slot (1-based)
  std::map<std::string, std::vector<size_t>> lists;   // var -> slots
  size_t size = 0;
};

struct SmtDecl {
  std::string name;
  std::string sort;
};

struct SmtSection {
  std::string name;
  std::vector<std::string> assertions;
};

struct EncodeOptions {
  // Restricts data variables that no input token determines.
  std::optional<std::map<std::string, std::vector<Value>>> value_domains;
};

struct SmtProblem {
  std::string logic;
  std::vector<std::string> preamble;  // function symbols and their tables
  std::vector<SmtDecl> decls;         // the variable inventory
  std::vector<SmtSection> sections;

  size_t n = 0, m = 0, K = 0, L = 0;
  long long sentinel = 0;
  long long log_total = 0;  // sum of log penalties
  std::vector<SlotLayout> layouts;  // per transition, index l-1
  std::vector<std::string> data_vars;
  ValueCoder coder;
  ObjectUniverse universe;
  std::vector<std::string> events;  // e_1..e_m
  std::vector<long long> log_penalties;

  static std::string T(size_t j);
  static std::string O(size_t j, size_t k);
  std::string D(size_t j, const std::string& x) const;
  static std::string pm(size_t j);
  static std::string pe(size_t i, size_t j);
  static std::string delta(size_t i, size_t j);
  std::string objective() const { return delta(m, n); }
};

SmtProblem encode(const Net& net, const EventLog& log, const TraceGraph& tg, const Bounds& bounds,
                  const EncodeOptions& opts = {});

// Canonical SMT-LIB text: options, logic, function symbols, declarations,
// assertions by section and, when check is set, a trailing (check-sat).
std::string emit(const SmtProblem& p, bool check = true);

}  // namespace dopid
