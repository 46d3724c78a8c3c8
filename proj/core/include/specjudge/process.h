#pragma once

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace specjudge {

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessResult {
  int exitCode = -1;     // -1 unless the child exited normally
  int termSignal = 0;    // signal that ended the child, if any
  bool timedOut = false;
  /// Interleaved stdout and stderr, truncated to the output cap.
  std::string output;
  std::chrono::milliseconds wallTime{0};
};

struct ProcessOptions {
  std::chrono::milliseconds timeout{60'000};
  /// Time between SIGTERM and SIGKILL once the timeout fires.
  std::chrono::milliseconds grace{2'000};
  std::size_t outputCap = 1 << 20;
};

/// Runs argv[0] (searched in PATH when it has no slash) in its own process
/// group. On timeout the whole group is terminated and the child reaped
/// before returning. Throws ProcessError when the program cannot be started.
ProcessResult runProcess(const std::vector<std::string>& argv, const ProcessOptions& opts = {});

/// First executable named `name` on PATH, or empty.
std::filesystem::path findOnPath(const std::string& name);

}  // namespace specjudge
