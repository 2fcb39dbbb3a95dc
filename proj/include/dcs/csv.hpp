#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace dcs {

// Shortest round-trip decimal form of a double ("0.05", "1.1829995080757871").
std::string format_double(double value);

// UTF-8 CSV with LF line endings and a header row; writes bytes, so output
// is identical across runs of the same data.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

  static std::string cell(double value) { return format_double(value); }
  static std::string cell(int value) { return std::to_string(value); }
  static std::string cell(long long value) { return std::to_string(value); }
  static std::string cell(bool value) { return value ? "true" : "false"; }

 private:
  std::ofstream out_;
  size_t columns_ = 0;
};

}  // namespace dcs
