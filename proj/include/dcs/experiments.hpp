#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcs/compression.hpp"

namespace dcs {

enum class Mu2Source { automatic, numeric, bound };
enum class RunMode { clustering, consensus, both };

// Full description of a study; unset list fields are filled with
// per-subcommand defaults when a run is launched.
struct ExperimentConfig {
  int n = 100;
  int m = 20;
  int radius = 10;
  double sigma_n2 = 0.01;
  double energy = 3.0;
  int k_sparsity = 4;
  double lambda = 2.0;
  double unit_cost = 1.0;
  double nu = 1.1;
  std::uint64_t seed = 1729;
  int trials = 0;  // 0 = per-subcommand default
  std::vector<double> p_list;
  std::vector<int> iteration_list;
  std::vector<int> queried_list;
  Mu2Source mu2_source = Mu2Source::automatic;
  RunMode mode = RunMode::both;
  bool empirical = false;
  std::optional<double> epsilon_override;

  double sigma_n() const;
  double snr() const;       // energy / (n * sigma_n2)
  int cluster_count() const;
  // mu2 for the configured source; `automatic` resolves to the given fallback.
  double resolve_mu2(Mu2Source fallback) const;
};

struct TradeoffPoint {
  int queried = 0;           // L
  double cost = 0.0;         // C_tot
  long long iterations_min = 0;
  long long delay = 0;       // D_cons = D * I_min
};

struct TradeoffBoundary {
  double p = 0.0;
  std::vector<TradeoffPoint> points;  // one per L = 1..N
};

struct RobustnessPoint {
  std::string mode;  // "clustering" or "consensus"
  int iterations = 0;
  double p = 0.0;
  double zeta = 0.0;
  double ci_low = 0.0;   // empirical mode only
  double ci_high = 0.0;
};

struct ValidationRow {
  std::string quantity;
  double formula = 0.0;
  double estimate = 0.0;
  double rel_gap = 0.0;
  bool pass = false;
};

struct TrialRecord {
  int trial = 0;
  CompressionMode mode = CompressionMode::clustering;
  double p = 0.0;
  double epsilon = 0.0;
  double recon_error = 0.0;  // ||x - x*|| / ||x||
  bool covered = false;      // epsilon >= ||sink-side perturbation||
  bool converged = false;
};

// Minimum-iteration boundary of the consensus cost/delay region at error
// threshold nu: for each L, the smallest I with the normalized bound <= nu.
TradeoffBoundary compute_tradeoff_region(const ExperimentConfig& config, double nu, double p);

// Analysis-mode normalized bounds over the erasure grid, clustering plus one
// consensus curve per configured iteration count.
std::vector<RobustnessPoint> compute_robustness_sweep(const ExperimentConfig& config,
                                                      const std::vector<double>& p_grid);

// Empirical robustness: mean ||x - x*|| / eps_ref per grid point with a
// normal-approximation 95% interval.
std::vector<RobustnessPoint> compute_robustness_empirical(const ExperimentConfig& config,
                                                          const std::vector<double>& p_grid);

// Side-by-side formula vs Monte Carlo report for the statistical
// approximations used by the epsilon rules.
std::vector<ValidationRow> validate_statistics(const ExperimentConfig& config);

// Full pipeline (synthesize -> observe -> compress -> erase -> solve),
// one record per trial. `iterations` is ignored for clustering.
std::vector<TrialRecord> run_end_to_end(const ExperimentConfig& config,
                                        CompressionMode mode, double p, int iterations);

}  // namespace dcs
