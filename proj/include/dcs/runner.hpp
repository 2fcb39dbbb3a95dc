#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dcs/experiments.hpp"

namespace dcs {

inline constexpr const char* kToolVersion = "dcsim 0.1.0";

struct RunManifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> outputs;  // CSVs, relative to directory
  double duration_seconds = 0.0;
};

// Resolves per-subcommand defaults (p grid, iteration list, trial counts,
// mu2 source) on a parsed config. Exposed so tests can pin the exact
// configuration a run will use.
ExperimentConfig resolve_defaults(const std::string& subcommand, ExperimentConfig config);

// Executes one of: tradeoff | robustness | validate | e2e | solve.
// Creates a fresh timestamped run directory under out_root, writes the CSV
// artifacts plus config.cfg and manifest.txt, and returns the manifest.
RunManifest run_subcommand(const std::string& subcommand, const ExperimentConfig& config,
                           const std::filesystem::path& out_root);

}  // namespace dcs
