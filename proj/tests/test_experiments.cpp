#include <doctest.h>

#include <cmath>

#include "dcs/experiments.hpp"
#include "dcs/recovery.hpp"

using namespace dcs;

namespace {

ExperimentConfig defaults() { return ExperimentConfig{}; }

}  // namespace

TEST_CASE("tradeoff boundary frozen point and edge cases") {
  ExperimentConfig cfg = defaults();
  cfg.mu2_source = Mu2Source::bound;
  const TradeoffBoundary boundary = compute_tradeoff_region(cfg, 1.1, 0.0);
  REQUIRE(boundary.points.size() == 100);

  const TradeoffPoint& at5 = boundary.points[4];
  CHECK(at5.queried == 5);
  CHECK(at5.cost == 5.0);
  CHECK(at5.iterations_min == 362);
  CHECK(at5.delay == 7240);

  const TradeoffPoint& full = boundary.points[99];
  CHECK(full.iterations_min == 0);
  CHECK(full.delay == 0);
}

TEST_CASE("minimum iterations never increase with more transmitters") {
  ExperimentConfig cfg = defaults();
  cfg.mu2_source = Mu2Source::bound;
  for (const double p : {0.0, 0.2, 0.5}) {
    const TradeoffBoundary boundary = compute_tradeoff_region(cfg, 1.1, p);
    for (size_t i = 1; i < boundary.points.size(); ++i)
      CHECK(boundary.points[i].iterations_min <= boundary.points[i - 1].iterations_min);
  }
}

TEST_CASE("higher erasure rates push the boundary up") {
  ExperimentConfig cfg = defaults();
  cfg.mu2_source = Mu2Source::bound;
  const TradeoffBoundary low = compute_tradeoff_region(cfg, 1.1, 0.0);
  const TradeoffBoundary high = compute_tradeoff_region(cfg, 1.1, 0.2);
  for (size_t i = 0; i < low.points.size(); ++i)
    CHECK(high.points[i].iterations_min >= low.points[i].iterations_min);
}

TEST_CASE("tradeoff rejects unreachable thresholds") {
  CHECK_THROWS_AS(compute_tradeoff_region(defaults(), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_tradeoff_region(defaults(), 0.9, 0.0), std::invalid_argument);
}

TEST_CASE("robustness sweep reproduces the analysis values") {
  ExperimentConfig cfg = defaults();
  cfg.mu2_source = Mu2Source::bound;
  cfg.iteration_list = {300, 400};
  const auto rows = compute_robustness_sweep(cfg, {0.01, 0.2});

  auto find = [&rows](const std::string& mode, int iters, double p) {
    for (const auto& row : rows)
      if (row.mode == mode && row.iterations == iters && row.p == p) return row.zeta;
    FAIL("row not found");
    return 0.0;
  };

  CHECK(find("clustering", 0, 0.2) == doctest::Approx(1.1829995080757871).epsilon(1e-9));
  CHECK(find("consensus", 400, 0.2) == doctest::Approx(1.0693771493019701).epsilon(1e-9));
  CHECK(find("consensus", 400, 0.01) == doctest::Approx(1.0620664185086226).epsilon(1e-9));
  CHECK(find("clustering", 0, 0.01) == doctest::Approx(1.0099504937381831).epsilon(1e-9));

  // clustering wins at small p, consensus wins at p = 0.2
  CHECK(find("clustering", 0, 0.01) < find("consensus", 400, 0.01));
  CHECK(find("clustering", 0, 0.2) > find("consensus", 400, 0.2));

  for (const auto& row : rows) CHECK(row.zeta >= 1.0);

  CHECK_THROWS_AS(compute_robustness_sweep(cfg, {}), std::invalid_argument);
}

TEST_CASE("validation report covers the documented quantities") {
  ExperimentConfig cfg = defaults();
  cfg.trials = 4000;  // keep the unit suite quick; the acceptance run uses more
  cfg.seed = 2024;
  const auto rows = validate_statistics(cfg);

  auto find = [&rows](const std::string& name) {
    for (const auto& row : rows)
      if (row.quantity == name) return row;
    FAIL("missing validation row: ", name);
    return ValidationRow{};
  };

  const ValidationRow mean_row = find("mean_norm_e_obs");
  CHECK(mean_row.pass);
  CHECK(mean_row.rel_gap < 0.02);

  // The chi-based variance formula ignores the shared ||n|| fluctuation across
  // dimensions; the real gap sits near 20% at N=100, M=20.
  const ValidationRow var_row = find("var_norm_e_obs");
  CHECK(!var_row.pass);
  CHECK(var_row.rel_gap > 0.10);
  CHECK(var_row.rel_gap < 0.30);

  const ValidationRow u_row = find("var_perturbation_clustering");
  CHECK(u_row.pass);
  CHECK(u_row.formula == doctest::Approx(0.06997439180537772).epsilon(1e-12));

  const ValidationRow inv20 = find("inv_delivered_mean_L20");
  CHECK(inv20.pass);
  CHECK(inv20.formula == doctest::Approx(0.06334628868373349).epsilon(1e-12));
  CHECK(inv20.estimate == doctest::Approx(0.0625).epsilon(1e-12));

  const ValidationRow inv5 = find("inv_delivered_mean_L5");
  CHECK(!inv5.pass);  // documents the small-L looseness of the approximation
  CHECK(inv5.formula == doctest::Approx(0.2682885189927445).epsilon(1e-12));
  CHECK(inv5.rel_gap == doctest::Approx(0.06846554247534246).epsilon(1e-6));

  const ValidationRow sampling = find("sampling_var_delta_I0");
  CHECK(sampling.pass);

  const ValidationRow bound = find("var_delta_bound_I400");
  CHECK(bound.pass);
  CHECK(bound.estimate <= bound.formula);
}

TEST_CASE("end-to-end records carry the pipeline outcome") {
  ExperimentConfig cfg = defaults();
  cfg.n = 64;
  cfg.m = 32;
  cfg.radius = 8;
  cfg.sigma_n2 = 0.0;
  cfg.energy = 1.0;
  cfg.k_sparsity = 4;
  cfg.trials = 5;
  cfg.epsilon_override = 1e-6;
  const auto records = run_end_to_end(cfg, CompressionMode::clustering, 0.0, 0);
  REQUIRE(records.size() == 5);
  for (const auto& rec : records) {
    CHECK(rec.epsilon == 1e-6);
    CHECK(rec.covered);  // noise-free, erasure-free: zero perturbation
    CHECK(rec.converged);
    CHECK(rec.recon_error < 1e-4);
  }
}

TEST_CASE("converged consensus with a full query matches the erasure-free reference") {
  ExperimentConfig cfg = defaults();
  cfg.trials = 10;
  cfg.queried_list = {100};
  const auto reference = run_end_to_end(cfg, CompressionMode::clustering, 0.0, 0);
  const auto consensus = run_end_to_end(cfg, CompressionMode::consensus, 0.0, 3000);
  REQUIRE(reference.size() == consensus.size());
  // same per-trial streams draw the same (x, n, A); with the network fully
  // mixed and every node queried the sink sees the same compression
  for (size_t i = 0; i < reference.size(); ++i)
    CHECK(consensus[i].recon_error ==
          doctest::Approx(reference[i].recon_error).epsilon(1e-5));
}

TEST_CASE("end-to-end is deterministic for a fixed seed") {
  ExperimentConfig cfg = defaults();
  cfg.trials = 3;
  const auto a = run_end_to_end(cfg, CompressionMode::consensus, 0.2, 50);
  const auto b = run_end_to_end(cfg, CompressionMode::consensus, 0.2, 50);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].epsilon == b[i].epsilon);
    CHECK(a[i].recon_error == b[i].recon_error);
    CHECK(a[i].covered == b[i].covered);
  }
}

TEST_CASE("consensus e2e epsilon uses the configured mu2 source") {
  ExperimentConfig cfg = defaults();
  cfg.trials = 1;
  cfg.iteration_list = {400};

  cfg.mu2_source = Mu2Source::bound;
  const auto bound_records = run_end_to_end(cfg, CompressionMode::consensus, 0.2, 400);
  const double eps_ref = epsilon_reference(100, 20, std::sqrt(0.01), 2.0);
  const double mu2_bound = std::cos(std::numbers::pi / 20.0);
  CHECK(bound_records[0].epsilon ==
        doctest::Approx(epsilon_consensus(eps_ref, mu2_bound, 400, 100, 5, 0.2, 3.0).epsilon)
            .epsilon(1e-12));

  cfg.mu2_source = Mu2Source::numeric;
  const auto numeric_records = run_end_to_end(cfg, CompressionMode::consensus, 0.2, 400);
  CHECK(numeric_records[0].epsilon < bound_records[0].epsilon);
}
