#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dcs/experiments.hpp"

namespace dcs {

// Parses the line-oriented `key = value` experiment format (# comments,
// comma-separated lists). Unknown keys, duplicates, malformed values, and
// invariant violations raise std::invalid_argument naming the key and line.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);

// Canonical text form; parse_config_text(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace dcs
