#include "specjudge/dafny.h"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include "specjudge/process.h"

namespace specjudge {

std::string_view toString(VerifierVerdict v) {
  switch (v) {
    case VerifierVerdict::Verified: return "verified";
    case VerifierVerdict::Failed: return "failed";
    case VerifierVerdict::Unknown: return "unknown";
  }
  return "?";
}

std::string_view toString(VerifierReason r) {
  switch (r) {
    case VerifierReason::None: return "none";
    case VerifierReason::ProofFailure: return "proof_failure";
    case VerifierReason::Timeout: return "timeout";
    case VerifierReason::ToolError: return "tool_error";
    case VerifierReason::ParseError: return "parse_error";
  }
  return "?";
}

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string firstLineWith(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find(needle) != std::string::npos) return trim(line);
  }
  return {};
}

std::string tail(const std::string& text, std::size_t n = 400) {
  return trim(text.size() <= n ? text : text.substr(text.size() - n));
}

}  // namespace

VerifierOutcome classifyDafnyOutput(int exitCode, const std::string& output, bool timedOut) {
  VerifierOutcome o;
  if (timedOut) {
    o.reason = VerifierReason::Timeout;
    o.message = "verifier exceeded the wall-clock timeout";
    return o;
  }
  if (output.find("parse errors detected") != std::string::npos ||
      output.find("resolution/type errors detected") != std::string::npos) {
    o.reason = VerifierReason::ParseError;
    o.message = firstLineWith(output, "Error");
    if (o.message.empty()) o.message = tail(output);
    return o;
  }
  static const std::regex summary(R"(finished with (\d+) verified, (\d+) errors?([^\r\n]*))");
  std::smatch m;
  if (std::regex_search(output, m, summary)) {
    long errors = std::stol(m[2].str());
    std::string rest = m[3].str();
    if (errors > 0) {
      o.verdict = VerifierVerdict::Failed;
      o.reason = VerifierReason::ProofFailure;
      o.message = firstLineWith(output, "Error");
      if (o.message.empty()) o.message = trim(m[0].str());
      return o;
    }
    if (rest.find("time out") != std::string::npos || rest.find("out of resource") != std::string::npos) {
      o.reason = VerifierReason::Timeout;
      o.message = trim(m[0].str());
      return o;
    }
    o.verdict = VerifierVerdict::Verified;
    o.reason = VerifierReason::None;
    return o;
  }
  o.reason = VerifierReason::ToolError;
  o.message = "exit code " + std::to_string(exitCode);
  if (auto t = tail(output); !t.empty()) o.message += ": " + t;
  return o;
}

ToolInfo probeTool(const std::filesystem::path& path) {
  ToolInfo info;
  info.path = path;
  if (path.empty()) {
    info.diagnostic = "no verifier path configured";
    return info;
  }
  ProcessOptions opts;
  opts.timeout = std::chrono::seconds(30);
  ProcessResult r;
  try {
    r = runProcess({path.string(), "--version"}, opts);
  } catch (const ProcessError& e) {
    info.diagnostic = e.what();
    return info;
  }
  static const std::regex version(R"((\d+)\.(\d+)\.(\d+))");
  std::smatch m;
  if (r.timedOut || r.exitCode != 0 || !std::regex_search(r.output, m, version)) {
    info.diagnostic = "not a verifier (exit " + std::to_string(r.exitCode) + ")";
    if (auto t = tail(r.output, 200); !t.empty()) info.diagnostic += ": " + t;
    return info;
  }
  info.present = true;
  info.version = m[0].str();
  info.major = std::stoi(m[1].str());
  return info;
}

std::filesystem::path resolveDafnyPath(const std::string& explicitPath) {
  if (!explicitPath.empty()) return explicitPath;
  if (const char* env = std::getenv(kDafnyPathEnv); env && *env) return env;
  return findOnPath("dafny");
}

DafnyVerifier::DafnyVerifier(std::filesystem::path toolPath, std::chrono::milliseconds timeout,
                             std::optional<std::filesystem::path> transcriptDir)
    : tool_(probeTool(toolPath)), timeout_(timeout), transcriptDir_(std::move(transcriptDir)) {
  if (!tool_.present) {
    throw ConfigError("verifier unavailable at '" + toolPath.string() + "': " + tool_.diagnostic);
  }
  if (transcriptDir_) std::filesystem::create_directories(*transcriptDir_);
}

VerifierOutcome DafnyVerifier::verify(const Harness& harness) const {
  namespace fs = std::filesystem;
  fs::path dir;
  bool scratch = !transcriptDir_;
  if (scratch) {
    std::string tmpl = (fs::temp_directory_path() / "specjudge-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("cannot create a scratch directory");
    dir = tmpl;
  } else {
    dir = *transcriptDir_;
  }
  fs::path file = dir / harness.fileName();
  {
    std::ofstream out(file, std::ios::binary);
    out << harness.source;
  }
  std::vector<std::string> argv{tool_.path.string()};
  if (tool_.major >= 4) {
    argv.insert(argv.end(), {"verify", file.string()});
  } else {
    argv.insert(argv.end(), {"/compile:0", file.string()});
  }
  ProcessOptions opts;
  opts.timeout = timeout_;
  VerifierOutcome outcome;
  try {
    ProcessResult r = runProcess(argv, opts);
    // Keep reports free of scratch paths.
    const std::string full = file.string();
    for (auto pos = r.output.find(full); pos != std::string::npos; pos = r.output.find(full, pos)) {
      r.output.replace(pos, full.size(), harness.fileName());
    }
    outcome = classifyDafnyOutput(r.exitCode, r.output, r.timedOut);
    outcome.wallTime = r.wallTime;
    if (!scratch) {
      std::ofstream log(file.string() + ".log", std::ios::binary);
      log << r.output;
    }
  } catch (const ProcessError& e) {
    outcome.reason = VerifierReason::ToolError;
    outcome.message = e.what();
  }
  if (scratch) {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  return outcome;
}

}  // namespace specjudge
