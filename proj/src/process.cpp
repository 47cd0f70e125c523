#include "dopid/process.hpp"

#include "dopid/sexpr.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace dopid {

ChildProcess::ChildProcess(const std::string& exe, const std::vector<std::string>& args) {
  int to_child[2], from_child[2], status_pipe[2];
  if (pipe(to_child) || pipe(from_child) || pipe2(status_pipe, O_CLOEXEC))
    throw ProcessError(std::string("pipe: ") + std::strerror(errno));
  std::vector<std::string> argv_s{exe};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_ = fork();
  if (pid_ < 0) throw ProcessError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    dup2(from_child[1], STDERR_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    close(status_pipe[0]);
    execvp(exe.c_str(), argv.data());
    int err = errno;
    (void)!::write(status_pipe[1], &err, sizeof err);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  close(status_pipe[1]);
  in_ = to_child[1];
  out_ = from_child[0];
  int err = 0;
  ssize_t got = ::read(status_pipe[0], &err, sizeof err);
  close(status_pipe[0]);
  if (got == sizeof err) {
    close(in_);
    close(out_);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
    throw ProcessError("cannot start '" + exe + "': " + std::strerror(err));
  }
  signal(SIGPIPE, SIG_IGN);
}

ChildProcess::~ChildProcess() { kill(); }

void ChildProcess::kill() {
  if (in_ >= 0) close(in_);
  if (out_ >= 0) close(out_);
  in_ = out_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
}

void ChildProcess::write(const std::string& text) {
  size_t off = 0;
  while (off < text.size()) {
    ssize_t w = ::write(in_, text.data() + off, text.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw ProcessError(std::string("write to solver: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(w);
  }
}

void ChildProcess::close_input() {
  if (in_ >= 0) close(in_);
  in_ = -1;
}

bool ChildProcess::fill(std::chrono::steady_clock::time_point deadline) {
  if (eof_) return false;
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
  if (left.count() <= 0) return false;
  pollfd pfd{out_, POLLIN, 0};
  int r = poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
  if (r < 0) {
    if (errno == EINTR) return true;
    throw ProcessError(std::string("poll: ") + std::strerror(errno));
  }
  if (r == 0) return false;
  char buf[65536];
  ssize_t n = ::read(out_, buf, sizeof buf);
  if (n < 0) {
    if (errno == EINTR) return true;
    throw ProcessError(std::string("read from solver: ") + std::strerror(errno));
  }
  if (n == 0) {
    eof_ = true;
    return false;
  }
  buffer_.append(buf, static_cast<size_t>(n));
  return true;
}

std::optional<std::string> ChildProcess::read_expr(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    size_t end = complete_prefix(buffer_);
    if (end == 0 && eof_ && !buffer_.empty()) {
      buffer_ += '\n';
      end = complete_prefix(buffer_);
    }
    if (end) {
      std::string expr = buffer_.substr(0, end);
      buffer_.erase(0, end);
      auto first = expr.find_first_not_of(" \t\r\n");
      return expr.substr(first);
    }
    if (!fill(deadline)) {
      if (eof_) {
        std::string rest = buffer_;
        throw ProcessError("solver exited" + (rest.empty() ? std::string() : ": " + rest));
      }
      return std::nullopt;
    }
  }
}

std::optional<std::string> ChildProcess::read_all(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (!eof_) {
    if (!fill(deadline) && !eof_) return std::nullopt;
  }
  std::string out = std::move(buffer_);
  buffer_.clear();
  return out;
}

}  // namespace dopid
