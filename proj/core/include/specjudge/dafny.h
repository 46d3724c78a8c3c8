#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "specjudge/harness.h"

namespace specjudge {

enum class VerifierVerdict { Verified, Failed, Unknown };
enum class VerifierReason { None, ProofFailure, Timeout, ToolError, ParseError };

std::string_view toString(VerifierVerdict v);
std::string_view toString(VerifierReason r);

struct VerifierOutcome {
  VerifierVerdict verdict = VerifierVerdict::Unknown;
  VerifierReason reason = VerifierReason::ToolError;
  /// Excerpt of the tool output explaining the reason; empty for Verified.
  std::string message;
  std::chrono::milliseconds wallTime{0};
};

/// Maps a finished verifier run to an outcome. Pure: depends only on its
/// arguments, so it is tested against recorded transcripts.
VerifierOutcome classifyDafnyOutput(int exitCode, const std::string& output, bool timedOut);

struct ToolInfo {
  std::filesystem::path path;
  bool present = false;
  std::string version;  // e.g. "4.4.0"
  int major = 0;
  /// Why the tool is considered absent.
  std::string diagnostic;
};

/// Runs `<path> --version`. Never throws; absence is reported in the result.
ToolInfo probeTool(const std::filesystem::path& path);

/// Environment variable consulted when no explicit path is given.
inline constexpr const char* kDafnyPathEnv = "SPECJUDGE_DAFNY";

/// Explicit path, then $SPECJUDGE_DAFNY, then `dafny` on PATH. Empty when
/// none is found.
std::filesystem::path resolveDafnyPath(const std::string& explicitPath);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DafnyVerifier {
 public:
  /// Throws ConfigError when the tool does not answer a version probe.
  DafnyVerifier(std::filesystem::path toolPath, std::chrono::milliseconds timeout,
                std::optional<std::filesystem::path> transcriptDir = std::nullopt);

  const ToolInfo& tool() const { return tool_; }

  /// Writes the harness to a scratch file and verifies it. With a transcript
  /// directory, the harness and `<file>.log` are kept there.
  VerifierOutcome verify(const Harness& harness) const;

 private:
  ToolInfo tool_;
  std::chrono::milliseconds timeout_;
  std::optional<std::filesystem::path> transcriptDir_;
};

}  // namespace specjudge
