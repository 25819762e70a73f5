#pragma once

// Experiment dispatch and the artifact manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mns/config.hpp"

namespace mns::cli {

struct ExperimentResult {
  std::string tag;
  RunConfig config;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> notes;
  std::vector<std::filesystem::path> artifacts;  // relative to the output directory
  bool passed() const;
};

/// Initial state for the configured grid, seed and envelope, mollified when
/// mollify.N is set.
solver::State initial_state(const RunConfig& c);

/// Runs c.experiment and writes into out: the experiment CSVs, config.txt
/// (canonical echo), summary.txt and manifest.txt. BlowUpError propagates.
ExperimentResult orchestrate(const RunConfig& c, const std::filesystem::path& out);

/// manifest.txt layout, one "key = value" per line:
///   version = <library version>
///   config.<key> = <value>      for every config key
///   hash.<file> = <16 hex digits> 64-bit FNV-1a of each artifact
struct Manifest {
  std::string version;
  RunConfig config;
  std::vector<std::pair<std::string, std::string>> hashes;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& out, const ExperimentResult& r);

/// Re-runs the manifest's configuration into out and reports whether every
/// artifact hash matches.
bool reproduce(const std::filesystem::path& manifest, const std::filesystem::path& out);

}  // namespace mns::cli
