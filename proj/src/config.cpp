#include "dcs/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dcs/csv.hpp"

namespace dcs {

namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, const std::string& key, int line) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end)
    fail(line, "value for '" + key + "' is not a number: '" + value + "'");
  return out;
}

long long parse_int(const std::string& value, const std::string& key, int line) {
  long long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end)
    fail(line, "value for '" + key + "' is not an integer: '" + value + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) parts.push_back(trim(item));
  return parts;
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream stream{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    const size_t eq = content.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + content + "'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");

    if (key == "n") {
      cfg.n = static_cast<int>(parse_int(value, key, line));
      if (cfg.n < 2) fail(line, "n must be >= 2");
    } else if (key == "m") {
      cfg.m = static_cast<int>(parse_int(value, key, line));
      if (cfg.m < 1) fail(line, "m must be >= 1");
    } else if (key == "radius") {
      cfg.radius = static_cast<int>(parse_int(value, key, line));
      if (cfg.radius < 1) fail(line, "radius must be >= 1");
    } else if (key == "sigma_n2") {
      cfg.sigma_n2 = parse_double(value, key, line);
      if (cfg.sigma_n2 < 0.0) fail(line, "sigma_n2 must be >= 0");
    } else if (key == "energy") {
      cfg.energy = parse_double(value, key, line);
      if (!(cfg.energy > 0.0)) fail(line, "energy must be > 0");
    } else if (key == "k_sparsity") {
      cfg.k_sparsity = static_cast<int>(parse_int(value, key, line));
      if (cfg.k_sparsity < 1) fail(line, "k_sparsity must be >= 1");
    } else if (key == "lambda") {
      cfg.lambda = parse_double(value, key, line);
      if (cfg.lambda < 0.0) fail(line, "lambda must be >= 0");
    } else if (key == "unit_cost") {
      cfg.unit_cost = parse_double(value, key, line);
      if (!(cfg.unit_cost > 0.0)) fail(line, "unit_cost must be > 0");
    } else if (key == "nu") {
      cfg.nu = parse_double(value, key, line);
      if (!(cfg.nu > 1.0)) fail(line, "nu must be > 1");
    } else if (key == "seed") {
      const long long s = parse_int(value, key, line);
      if (s < 0) fail(line, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int(value, key, line));
      if (cfg.trials < 0) fail(line, "trials must be >= 0");
    } else if (key == "p") {
      cfg.p_list.clear();
      for (const auto& item : split_list(value)) {
        const double p = parse_double(item, key, line);
        if (p < 0.0 || p >= 1.0) fail(line, "p must be in [0,1)");
        cfg.p_list.push_back(p);
      }
      if (cfg.p_list.empty()) fail(line, "p list is empty");
    } else if (key == "iterations") {
      cfg.iteration_list.clear();
      for (const auto& item : split_list(value)) {
        const int i = static_cast<int>(parse_int(item, key, line));
        if (i < 0) fail(line, "iterations must be >= 0");
        cfg.iteration_list.push_back(i);
      }
    } else if (key == "queried") {
      cfg.queried_list.clear();
      for (const auto& item : split_list(value)) {
        const int q = static_cast<int>(parse_int(item, key, line));
        if (q < 1) fail(line, "queried counts must be >= 1");
        cfg.queried_list.push_back(q);
      }
    } else if (key == "mu2") {
      if (value == "auto") cfg.mu2_source = Mu2Source::automatic;
      else if (value == "numeric") cfg.mu2_source = Mu2Source::numeric;
      else if (value == "bound") cfg.mu2_source = Mu2Source::bound;
      else fail(line, "mu2 must be auto, numeric, or bound");
    } else if (key == "mode") {
      if (value == "clustering") cfg.mode = RunMode::clustering;
      else if (value == "consensus") cfg.mode = RunMode::consensus;
      else if (value == "both") cfg.mode = RunMode::both;
      else fail(line, "mode must be clustering, consensus, or both");
    } else if (key == "empirical") {
      if (value == "true") cfg.empirical = true;
      else if (value == "false") cfg.empirical = false;
      else fail(line, "empirical must be true or false");
    } else if (key == "epsilon") {
      const double e = parse_double(value, key, line);
      if (e < 0.0) fail(line, "epsilon must be >= 0");
      cfg.epsilon_override = e;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  if (cfg.k_sparsity > cfg.n)
    throw std::invalid_argument("config: k_sparsity must not exceed n");
  if (cfg.m > cfg.n) throw std::invalid_argument("config: m must not exceed n");
  for (const int q : cfg.queried_list)
    if (q > cfg.n) throw std::invalid_argument("config: queried counts must not exceed n");
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "n = " << cfg.n << '\n';
  out << "m = " << cfg.m << '\n';
  out << "radius = " << cfg.radius << '\n';
  out << "sigma_n2 = " << format_double(cfg.sigma_n2) << '\n';
  out << "energy = " << format_double(cfg.energy) << '\n';
  out << "k_sparsity = " << cfg.k_sparsity << '\n';
  out << "lambda = " << format_double(cfg.lambda) << '\n';
  out << "unit_cost = " << format_double(cfg.unit_cost) << '\n';
  out << "nu = " << format_double(cfg.nu) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "trials = " << cfg.trials << '\n';
  auto write_list = [&out](const char* key, const auto& list, auto&& format) {
    if (list.empty()) return;
    out << key << " = ";
    for (size_t i = 0; i < list.size(); ++i) {
      if (i) out << ", ";
      out << format(list[i]);
    }
    out << '\n';
  };
  write_list("p", cfg.p_list, [](double v) { return format_double(v); });
  write_list("iterations", cfg.iteration_list, [](int v) { return std::to_string(v); });
  write_list("queried", cfg.queried_list, [](int v) { return std::to_string(v); });
  out << "mu2 = "
      << (cfg.mu2_source == Mu2Source::automatic
              ? "auto"
              : cfg.mu2_source == Mu2Source::numeric ? "numeric" : "bound")
      << '\n';
  out << "mode = "
      << (cfg.mode == RunMode::clustering
              ? "clustering"
              : cfg.mode == RunMode::consensus ? "consensus" : "both")
      << '\n';
  out << "empirical = " << (cfg.empirical ? "true" : "false") << '\n';
  if (cfg.epsilon_override)
    out << "epsilon = " << format_double(*cfg.epsilon_override) << '\n';
  return out.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.n == b.n && a.m == b.m && a.radius == b.radius && a.sigma_n2 == b.sigma_n2 &&
         a.energy == b.energy && a.k_sparsity == b.k_sparsity && a.lambda == b.lambda &&
         a.unit_cost == b.unit_cost && a.nu == b.nu && a.seed == b.seed &&
         a.trials == b.trials && a.p_list == b.p_list &&
         a.iteration_list == b.iteration_list && a.queried_list == b.queried_list &&
         a.mu2_source == b.mu2_source && a.mode == b.mode && a.empirical == b.empirical &&
         a.epsilon_override == b.epsilon_override;
}

}  // namespace dcs
