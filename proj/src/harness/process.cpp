#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"

namespace tfbench::harness {
namespace {

using Clock = std::chrono::steady_clock;

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

// Polls with a short, growing sleep; returns true when the child exited.
bool wait_until(pid_t pid, Clock::time_point deadline, int& status) {
  auto nap = std::chrono::microseconds(200);
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) return true;
    if (r < 0 && errno != EINTR) throw Error("PROCESS_ERROR", std::string("waitpid: ") + std::strerror(errno));
    if (Clock::now() >= deadline) return false;
    std::this_thread::sleep_for(nap);
    nap = std::min(nap * 2, std::chrono::microseconds(20000));
  }
}

}  // namespace

std::string shell_quote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string expand_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

ProcessResult run_shell(const std::string& command, const std::filesystem::path& workdir,
                        const std::filesystem::path& log_path, double timeout_seconds) {
  std::filesystem::create_directories(workdir);
  if (log_path.has_parent_path()) std::filesystem::create_directories(log_path.parent_path());
  const std::string wd = workdir.string();
  const std::string log = log_path.string();

  ProcessResult result;
  const auto start = Clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw Error("PROCESS_ERROR", std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    const int in = open("/dev/null", O_RDONLY);
    const int out = open(log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (in < 0 || out < 0 || chdir(wd.c_str()) != 0) _exit(127);
    dup2(in, STDIN_FILENO);
    dup2(out, STDOUT_FILENO);
    dup2(out, STDERR_FILENO);
    close(in);
    close(out);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(timeout_seconds));
  int status = 0;
  if (!wait_until(pid, deadline, status)) {
    result.timed_out = true;
    kill(-pid, SIGTERM);
    if (!wait_until(pid, Clock::now() + std::chrono::seconds(2), status)) {
      kill(-pid, SIGKILL);
      while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
    }
  }
  // Stray grandchildren must not outlive the command.
  kill(-pid, SIGKILL);
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  result.exit_code = decode_status(status);
  return result;
}

}  // namespace tfbench::harness
