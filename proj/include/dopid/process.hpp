#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dopid {

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A child process whose stdin/stdout are piped; stderr goes to stdout.
class ChildProcess {
 public:
  ChildProcess(const std::string& exe, const std::vector<std::string>& args);
  ~ChildProcess();
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  void write(const std::string& text);
  // Next complete s-expression (or atom) on stdout; nullopt on timeout.
  // Throws ProcessError when the child exits first.
  std::optional<std::string> read_expr(std::chrono::milliseconds timeout);
  void close_input();
  // Everything left on stdout until exit (bounded by timeout).
  std::optional<std::string> read_all(std::chrono::milliseconds timeout);
  void kill();

 private:
  bool fill(std::chrono::steady_clock::time_point deadline);

  int pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  bool eof_ = false;
  std::string buffer_;
};

}  // namespace dopid
