#pragma once

// Child process execution with a wall-clock deadline. The child is
// SIGKILLed when the deadline passes and is always reaped; stdout and
// stderr are drained concurrently with stdin feeding so no pipe can
// deadlock.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <string>
#include <vector>

namespace dgl {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string out;
  std::string err;
  std::string error_detail;
};

// Splits a command string on whitespace, honoring single and double quotes.
inline std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  bool has = false;
  for (char c : cmd) {
    if (quote) {
      if (c == quote) quote = 0;
      else cur += c;
    } else if (c == '\'' || c == '"') {
      quote = c;
      has = true;
    } else if (c == ' ' || c == '\t') {
      if (has || !cur.empty()) out.push_back(cur);
      cur.clear();
      has = false;
    } else {
      cur += c;
      has = true;
    }
  }
  if (has || !cur.empty()) out.push_back(cur);
  return out;
}

inline ProcessResult run_process(const std::vector<std::string>& argv,
                                 const std::string& stdin_data, int timeout_ms,
                                 bool feed_stdin) {
  ProcessResult result;
  if (argv.empty()) {
    result.spawn_failed = true;
    result.error_detail = "empty command";
    return result;
  }
  // Writes to a dead child's stdin must come back as EPIPE, not a signal.
  static const bool sigpipe_ignored = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int in_pipe[2] = {-1, -1}, out_pipe[2] = {-1, -1}, err_pipe[2] = {-1, -1};
  if ((feed_stdin && pipe(in_pipe) != 0) || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    result.spawn_failed = true;
    result.error_detail = std::string("pipe: ") + std::strerror(errno);
    return result;
  }

  pid_t pid = fork();
  if (pid < 0) {
    result.spawn_failed = true;
    result.error_detail = std::string("fork: ") + std::strerror(errno);
    return result;
  }
  if (pid == 0) {
    if (feed_stdin) {
      dup2(in_pipe[0], STDIN_FILENO);
      close(in_pipe[0]);
      close(in_pipe[1]);
    }
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    // Marker the parent recognizes as a spawn failure.
    std::string msg = std::string("exec failed: ") + std::strerror(errno) + "\n";
    ssize_t ignored = write(STDERR_FILENO, msg.c_str(), msg.size());
    (void)ignored;
    _exit(127);
  }

  if (feed_stdin) close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  int in_fd = feed_stdin ? in_pipe[1] : -1;
  int out_fd = out_pipe[0];
  int err_fd = err_pipe[0];
  size_t written = 0;
  if (in_fd >= 0 && stdin_data.empty()) {
    close(in_fd);
    in_fd = -1;
  }

  using Clock = std::chrono::steady_clock;
  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  char buf[4096];
  bool killed = false;

  while (out_fd >= 0 || err_fd >= 0 || in_fd >= 0) {
    auto now = Clock::now();
    if (!killed && now >= deadline) {
      kill(pid, SIGKILL);
      killed = true;
      if (in_fd >= 0) { close(in_fd); in_fd = -1; }
    }
    int wait_ms = killed
        ? 50
        : (int)std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    if (wait_ms < 0) wait_ms = 0;
    if (wait_ms > 200) wait_ms = 200;

    struct pollfd fds[3];
    int nfds = 0;
    int out_idx = -1, err_idx = -1, in_idx = -1;
    if (out_fd >= 0) { fds[nfds] = {out_fd, POLLIN, 0}; out_idx = nfds++; }
    if (err_fd >= 0) { fds[nfds] = {err_fd, POLLIN, 0}; err_idx = nfds++; }
    if (in_fd >= 0) { fds[nfds] = {in_fd, POLLOUT, 0}; in_idx = nfds++; }
    int rc = poll(fds, nfds, wait_ms);
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;

    if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP))) {
      ssize_t n = read(out_fd, buf, sizeof buf);
      if (n > 0) result.out.append(buf, (size_t)n);
      else { close(out_fd); out_fd = -1; }
    }
    if (err_idx >= 0 && (fds[err_idx].revents & (POLLIN | POLLHUP))) {
      ssize_t n = read(err_fd, buf, sizeof buf);
      if (n > 0) result.err.append(buf, (size_t)n);
      else { close(err_fd); err_fd = -1; }
    }
    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t n = write(in_fd, stdin_data.data() + written, stdin_data.size() - written);
      if (n > 0) written += (size_t)n;
      if (n < 0 || written >= stdin_data.size()) { close(in_fd); in_fd = -1; }
    }
  }

  // Reap. Pipes at EOF do not imply exit, so a child that lingers past
  // the deadline after closing them is still killed.
  int status = 0;
  if (killed) {
    waitpid(pid, &status, 0);
  } else {
    for (;;) {
      pid_t r = waitpid(pid, &status, WNOHANG);
      if (r == pid) break;
      if (Clock::now() >= deadline) {
        kill(pid, SIGKILL);
        killed = true;
        waitpid(pid, &status, 0);
        break;
      }
      usleep(2000);
    }
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  result.timed_out = killed;
  if (!killed && result.exit_code == 127 && result.err.find("exec failed:") != std::string::npos) {
    result.spawn_failed = true;
    result.error_detail = result.err.substr(0, result.err.find('\n'));
  }
  return result;
}

}  // namespace dgl
