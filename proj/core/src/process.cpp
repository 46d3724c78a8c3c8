#include "specjudge/process.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace specjudge {

namespace {

using Clock = std::chrono::steady_clock;

struct Pipe {
  int fd[2] = {-1, -1};
  ~Pipe() {
    for (int f : fd) {
      if (f >= 0) ::close(f);
    }
  }
  void closeEnd(int i) {
    if (fd[i] >= 0) ::close(fd[i]);
    fd[i] = -1;
  }
};

void openPipe(Pipe& p) {
  if (::pipe2(p.fd, O_CLOEXEC) != 0) throw ProcessError(std::string("pipe: ") + std::strerror(errno));
}

int waitChild(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) return 0;
  }
  return status;
}

}  // namespace

ProcessResult runProcess(const std::vector<std::string>& argv, const ProcessOptions& opts) {
  if (argv.empty()) throw ProcessError("empty command line");
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  Pipe out, execErr;
  openPipe(out);
  openPipe(execErr);

  const auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) throw ProcessError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(out.fd[1], STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execvp(args[0], args.data());
    int err = errno;
    [[maybe_unused]] auto n = ::write(execErr.fd[1], &err, sizeof err);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out.closeEnd(1);
  execErr.closeEnd(1);

  int childErr = 0;
  ssize_t got;
  do {
    got = ::read(execErr.fd[0], &childErr, sizeof childErr);
  } while (got < 0 && errno == EINTR);
  if (got == static_cast<ssize_t>(sizeof childErr)) {
    waitChild(pid);
    throw ProcessError("cannot execute " + argv[0] + ": " + std::strerror(childErr));
  }

  ProcessResult result;
  const auto deadline = start + opts.timeout;
  auto killAt = Clock::time_point::max();
  std::array<char, 8192> buf{};
  bool open = true;
  while (open) {
    auto now = Clock::now();
    if (!result.timedOut && now >= deadline) {
      result.timedOut = true;
      ::kill(-pid, SIGTERM);
      killAt = now + opts.grace;
    }
    if (result.timedOut && now >= killAt) {
      ::kill(-pid, SIGKILL);
      break;
    }
    auto until = result.timedOut ? killAt : deadline;
    auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(until - now).count();
    pollfd pfd{out.fd[0], POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(std::max<long long>(1, std::min<long long>(wait, 1000))));
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;
    ssize_t n = ::read(out.fd[0], buf.data(), buf.size());
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      open = false;
      break;
    }
    std::size_t room = opts.outputCap > result.output.size() ? opts.outputCap - result.output.size() : 0;
    result.output.append(buf.data(), std::min<std::size_t>(room, static_cast<std::size_t>(n)));
  }
  if (result.timedOut) ::kill(-pid, SIGKILL);
  int status = waitChild(pid);
  if (WIFEXITED(status)) result.exitCode = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) result.termSignal = WTERMSIG(status);
  result.wallTime = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  return result;
}

std::filesystem::path findOnPath(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (!path) return {};
  std::stringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    std::filesystem::path candidate = std::filesystem::path(dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0 && !std::filesystem::is_directory(candidate)) return candidate;
  }
  return {};
}

}  // namespace specjudge
