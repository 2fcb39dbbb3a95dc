#include "dcs/runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "dcs/config.hpp"
#include "dcs/csv.hpp"
#include "dcs/recovery.hpp"

namespace dcs {

namespace {

bool known_subcommand(const std::string& name) {
  return name == "tradeoff" || name == "robustness" || name == "validate" ||
         name == "e2e" || name == "solve";
}

std::filesystem::path make_run_directory(const std::filesystem::path& root,
                                         const std::string& subcommand,
                                         std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
  const std::string base = subcommand + "-" + stamp + "-seed" + std::to_string(seed);
  std::filesystem::path dir = root / base;
  for (int suffix = 2; std::filesystem::exists(dir); ++suffix)
    dir = root / (base + "-" + std::to_string(suffix));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string trim_trailing(const std::string& name, double p) {
  return name + "_p" + format_double(p) + ".csv";
}

void write_tradeoff(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                    RunManifest& manifest) {
  if (cfg.mode == RunMode::clustering)
    throw std::invalid_argument(
        "tradeoff: clustering has no cost-delay tradeoff (cost and delay are fixed "
        "by the radius); run it with the consensus mode");
  for (const double p : cfg.p_list) {
    const TradeoffBoundary boundary = compute_tradeoff_region(cfg, cfg.nu, p);
    const std::filesystem::path file = trim_trailing("tradeoff", p);
    CsvWriter csv(dir / file, {"p", "L", "C_tot", "I_min", "D_cons"});
    for (const TradeoffPoint& point : boundary.points)
      csv.row({format_double(p), CsvWriter::cell(point.queried),
               CsvWriter::cell(point.cost), CsvWriter::cell(point.iterations_min),
               CsvWriter::cell(point.delay)});
    manifest.outputs.push_back(file);
  }
}

void write_robustness(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                      RunManifest& manifest) {
  const auto rows = compute_robustness_sweep(cfg, cfg.p_list);
  CsvWriter csv(dir / "robustness.csv", {"mode", "I", "p", "zeta_norm"});
  for (const RobustnessPoint& row : rows)
    csv.row({row.mode, CsvWriter::cell(row.iterations), format_double(row.p),
             format_double(row.zeta)});
  manifest.outputs.push_back("robustness.csv");

  if (cfg.empirical) {
    const auto empirical = compute_robustness_empirical(cfg, cfg.p_list);
    CsvWriter ecsv(dir / "robustness_empirical.csv",
                   {"mode", "I", "p", "zeta_norm", "ci_low", "ci_high"});
    for (const RobustnessPoint& row : empirical)
      ecsv.row({row.mode, CsvWriter::cell(row.iterations), format_double(row.p),
                format_double(row.zeta), format_double(row.ci_low),
                format_double(row.ci_high)});
    manifest.outputs.push_back("robustness_empirical.csv");
  }
}

void write_validate(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                    RunManifest& manifest) {
  const auto rows = validate_statistics(cfg);
  CsvWriter csv(dir / "validate.csv", {"quantity", "formula", "estimate", "rel_gap", "pass"});
  for (const ValidationRow& row : rows)
    csv.row({row.quantity, format_double(row.formula), format_double(row.estimate),
             format_double(row.rel_gap), CsvWriter::cell(row.pass)});
  manifest.outputs.push_back("validate.csv");
}

void append_e2e_rows(CsvWriter& csv, const std::vector<TrialRecord>& records) {
  for (const TrialRecord& rec : records)
    csv.row({CsvWriter::cell(rec.trial),
             rec.mode == CompressionMode::clustering ? "clustering" : "consensus",
             format_double(rec.p), format_double(rec.epsilon),
             format_double(rec.recon_error), CsvWriter::cell(rec.covered ? 1 : 0),
             CsvWriter::cell(rec.converged ? 1 : 0)});
}

void write_e2e(const ExperimentConfig& cfg, const std::filesystem::path& dir,
               RunManifest& manifest) {
  CsvWriter csv(dir / "e2e.csv",
                {"trial", "mode", "p", "epsilon", "recon_error", "coverage", "converged"});
  for (const double p : cfg.p_list) {
    if (cfg.mode != RunMode::consensus)
      append_e2e_rows(csv, run_end_to_end(cfg, CompressionMode::clustering, p, 0));
    if (cfg.mode != RunMode::clustering)
      for (const int iters : cfg.iteration_list)
        append_e2e_rows(csv, run_end_to_end(cfg, CompressionMode::consensus, p, iters));
  }
  manifest.outputs.push_back("e2e.csv");
}

void write_solution_file(const std::filesystem::path& path, const SpatialSignal& signal,
                         const Observation& obs, const Eigen::VectorXd& x_star) {
  CsvWriter csv(path, {"node", "x_true", "z", "x_star"});
  for (int i = 0; i < signal.n; ++i)
    csv.row({CsvWriter::cell(i), format_double(signal.samples(i)),
             format_double(obs.values(i)), format_double(x_star(i))});
}

void write_solve(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                 RunManifest& manifest) {
  // One fully-traced trial per configured mode at the first erasure level.
  const double p = cfg.p_list.front();
  const int iterations = cfg.iteration_list.front();
  const double eps_ref = epsilon_reference(cfg.n, cfg.m, cfg.sigma_n(), cfg.lambda);
  const double snr = cfg.snr();

  CsvWriter summary(dir / "solve.csv",
                    {"trial", "mode", "p", "epsilon", "recon_error", "coverage", "converged"});
  manifest.outputs.push_back("solve.csv");

  const NetworkTopology topo = build_line_network(cfg.n, cfg.radius);
  Rng master(cfg.seed);

  auto run_one = [&](CompressionMode mode) {
    Rng rng = master.derive(mode == CompressionMode::clustering ? 0 : 1);
    const SpatialSignal signal = synthesize_sparse_signal(cfg.n, cfg.k_sparsity, cfg.energy, rng);
    const Observation obs = observe(signal, cfg.sigma_n2, rng);
    const MeasurementEnsemble ens = sample_ensemble(cfg.m, cfg.n, rng);
    const Eigen::MatrixXd projections = local_projections(ens, obs);

    CompressionOutcome outcome;
    double epsilon = 0.0;
    if (mode == CompressionMode::clustering) {
      const ClusterPlan plan = form_clusters(topo);
      outcome = cluster_compress(plan, projections, erase_packets(plan.heads, p, rng));
      epsilon = eps_ref > 0.0 ? epsilon_clustering(eps_ref, p, cfg.n, cfg.radius, snr) : 0.0;
    } else {
      const ConsensusWeights weights = consensus_weights(topo);
      const double mu2 =
          cfg.mu2_source == Mu2Source::bound ? weights.mu2_bound : weights.mu2_numeric;
      const Eigen::MatrixXd state = consensus_run(weights, projections, iterations);
      const int queried_count =
          cfg.queried_list.empty() ? cfg.cluster_count() : cfg.queried_list.front();
      const std::vector<int> queried = rng.sample_without_replacement(cfg.n, queried_count);
      outcome = consensus_sink_estimate(state, iterations, queried,
                                        erase_packets(queried, p, rng));
      epsilon = eps_ref > 0.0
                    ? epsilon_consensus(eps_ref, mu2, iterations, cfg.n, queried_count, p, snr).epsilon
                    : 0.0;
    }
    if (cfg.epsilon_override) epsilon = *cfg.epsilon_override;

    const BpdnSolution solution = solve_bpdn({ens.matrix, outcome.vector, epsilon});
    const double perturbation = (outcome.vector - ens.matrix * signal.samples).norm();
    const std::string mode_name =
        mode == CompressionMode::clustering ? "clustering" : "consensus";
    summary.row({CsvWriter::cell(0), mode_name, format_double(p), format_double(epsilon),
                 format_double((solution.x_star - signal.samples).norm() / signal.samples.norm()),
                 CsvWriter::cell(epsilon >= perturbation ? 1 : 0),
                 CsvWriter::cell(solution.converged ? 1 : 0)});

    const std::string file = "solution_" + mode_name + ".csv";
    write_solution_file(dir / file, signal, obs, solution.x_star);
    manifest.outputs.push_back(file);
  };

  if (cfg.mode != RunMode::consensus) run_one(CompressionMode::clustering);
  if (cfg.mode != RunMode::clustering) run_one(CompressionMode::consensus);
}

}  // namespace

ExperimentConfig resolve_defaults(const std::string& subcommand, ExperimentConfig cfg) {
  if (!known_subcommand(subcommand))
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");

  if (cfg.queried_list.empty()) cfg.queried_list = {cfg.cluster_count()};

  // The analysis subcommands reproduce figures computed with the closed-form
  // bound; simulation subcommands use the spectrum of the P they iterate.
  const Mu2Source mu2_default =
      (subcommand == "tradeoff" || subcommand == "robustness") ? Mu2Source::bound
                                                               : Mu2Source::numeric;
  if (cfg.mu2_source == Mu2Source::automatic) cfg.mu2_source = mu2_default;

  if (subcommand == "tradeoff") {
    if (cfg.p_list.empty()) cfg.p_list = {0.0, 0.05, 0.2, 0.5};
  } else if (subcommand == "robustness") {
    if (cfg.p_list.empty())
      for (int i = 0; i <= 50; ++i) cfg.p_list.push_back(i / 100.0);
    if (cfg.iteration_list.empty()) cfg.iteration_list = {300, 400};
    if (cfg.trials == 0) cfg.trials = 200;
  } else if (subcommand == "validate") {
    if (cfg.p_list.empty()) cfg.p_list = {0.2};
    if (cfg.iteration_list.empty()) cfg.iteration_list = {400};
    if (cfg.trials == 0) cfg.trials = 10000;
  } else if (subcommand == "e2e") {
    if (cfg.p_list.empty()) cfg.p_list = {0.0, 0.2};
    if (cfg.iteration_list.empty()) cfg.iteration_list = {400};
    if (cfg.trials == 0) cfg.trials = 200;
  } else if (subcommand == "solve") {
    if (cfg.p_list.empty()) cfg.p_list = {0.0};
    if (cfg.iteration_list.empty()) cfg.iteration_list = {400};
  }
  if (cfg.iteration_list.empty()) cfg.iteration_list = {400};
  return cfg;
}

RunManifest run_subcommand(const std::string& subcommand, const ExperimentConfig& raw,
                           const std::filesystem::path& out_root) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = resolve_defaults(subcommand, raw);

  RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.seed = cfg.seed;
  manifest.directory = make_run_directory(out_root, subcommand, cfg.seed);

  {
    std::ofstream snapshot(manifest.directory / "config.cfg", std::ios::binary);
    snapshot << emit_config(cfg);
  }

  if (subcommand == "tradeoff") write_tradeoff(cfg, manifest.directory, manifest);
  else if (subcommand == "robustness") write_robustness(cfg, manifest.directory, manifest);
  else if (subcommand == "validate") write_validate(cfg, manifest.directory, manifest);
  else if (subcommand == "e2e") write_e2e(cfg, manifest.directory, manifest);
  else write_solve(cfg, manifest.directory, manifest);

  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream out(manifest.directory / "manifest.txt", std::ios::binary);
  out << "tool = " << kToolVersion << '\n';
  out << "subcommand = " << subcommand << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "duration_seconds = " << format_double(manifest.duration_seconds) << '\n';
  out << "config = config.cfg" << '\n';
  for (const auto& file : manifest.outputs) out << "output = " << file.string() << '\n';
  return manifest;
}

}  // namespace dcs
