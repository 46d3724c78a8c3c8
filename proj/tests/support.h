#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "specjudge/dataset.h"
#include "specjudge/pipeline.h"

namespace specjudge::testing {

inline std::filesystem::path sourceDir() { return SPECJUDGE_SOURCE_DIR; }
inline std::filesystem::path sampleDir() { return sourceDir() / "data" / "sample"; }

/// A task from data/sample, `file` being dataset.json or variants.json.
inline TaskRecord sampleTask(const std::string& id, const std::string& file = "dataset.json") {
  auto entries = loadDataset(readFile(sampleDir() / file), specFilesLookup({sampleDir() / "specs"}));
  for (auto& e : entries) {
    if (e.taskId != id) continue;
    if (!e.parsed()) throw std::runtime_error("task " + id + ": " + e.diagnostic);
    return *e.record;
  }
  throw std::runtime_error("no sample task " + id);
}

/// Eval run over a sample dataset with the committed sidecars.
inline RunConfig sampleConfig(const std::string& file = "dataset.json") {
  RunConfig cfg;
  cfg.dataset = sampleDir() / file;
  cfg.specs = {sampleDir() / "specs"};
  cfg.curated = sampleDir() / "curated.json";
  cfg.labels = sampleDir() / "labels.json";
  cfg.jobs = 1;
  return cfg;
}

}  // namespace specjudge::testing
