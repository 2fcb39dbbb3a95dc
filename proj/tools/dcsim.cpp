// Command-line front end: dcsim <subcommand> [--config file] [--out dir] ...
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dcs/config.hpp"
#include "dcs/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{std::string(dcs::kToolVersion) +
               " - in-network compression studies over erasure channels"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = -1;
  std::string mu2;
  bool empirical = false;

  for (const auto& name : {"tradeoff", "robustness", "validate", "e2e", "solve"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value experiment file");
    sub->add_option("--out", out_dir, "output root (default: DCSIM_OUT or ./runs)");
    sub->add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--trials", trials, "Monte Carlo trial count override");
    sub->add_option("--mu2", mu2, "mu2 source: numeric or bound")
        ->check(CLI::IsMember({"numeric", "bound"}));
    sub->add_flag("--empirical", empirical, "also run the solver-in-the-loop pipeline");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    dcs::ExperimentConfig config =
        config_path.empty() ? dcs::ExperimentConfig{} : dcs::parse_config(config_path);
    if (seed_set) config.seed = seed;
    if (trials >= 0) config.trials = trials;
    if (mu2 == "numeric") config.mu2_source = dcs::Mu2Source::numeric;
    if (mu2 == "bound") config.mu2_source = dcs::Mu2Source::bound;
    if (empirical) config.empirical = true;

    if (out_dir.empty()) {
      const char* env = std::getenv("DCSIM_OUT");
      out_dir = env != nullptr ? env : "runs";
    }

    const dcs::RunManifest manifest = dcs::run_subcommand(subcommand, config, out_dir);
    std::cout << manifest.directory.string() << '\n';
    for (const auto& file : manifest.outputs)
      std::cout << "  " << file.string() << '\n';
    return 0;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "runtime error: " << err.what() << '\n';
    return 2;
  }
}
