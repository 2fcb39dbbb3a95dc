#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dcs/network.hpp"
#include "dcs/rng.hpp"
#include "dcs/signal.hpp"

namespace dcs {

// M x N Gaussian measurement matrix, entries i.i.d. N(0, 1/M).
struct MeasurementEnsemble {
  Eigen::MatrixXd matrix;
  int m = 0;
  int n = 0;
};

// Outcome of pushing packets through the node-to-sink erasure channel.
// `delivered` is a subset of `sent` and never empty: the all-erased event is
// excluded by resampling (zero-truncated erasure law).
struct ErasurePattern {
  std::vector<int> sent;
  std::vector<int> delivered;
  double erasure_prob = 0.0;
};

enum class CompressionMode { clustering, consensus };

// Sink-side compressed vector plus the metadata of how it was produced.
struct CompressionOutcome {
  Eigen::VectorXd vector;
  CompressionMode mode = CompressionMode::clustering;
  int iterations = 0;          // consensus only, 0 for clustering
  ErasurePattern erasures;
  std::vector<int> queried;    // consensus only
};

// Per-column disagreement diagnostics for a consensus run: the directly
// computed squared deviation from the mean, its eigen-expansion, and the
// mu2^(2I)-decay bound on the initial disagreement.
struct DisagreementReport {
  Eigen::VectorXd direct;
  Eigen::VectorXd eigen_expansion;
  Eigen::VectorXd decay_bound;
};

// Set allow_large_m to lift the M <= N/2 compression-regime guard.
MeasurementEnsemble sample_ensemble(int m, int n, Rng& rng, bool allow_large_m = false);

// N x M stack of local projections, row k = z_k * a_k^T. Rows sum to A z.
Eigen::MatrixXd local_projections(const MeasurementEnsemble& ensemble,
                                  const Observation& observation);

ErasurePattern erase_packets(const std::vector<int>& senders, double p, Rng& rng);

// Sum of per-cluster aggregates over the delivered clusterheads.
CompressionOutcome cluster_compress(const ClusterPlan& plan,
                                    const Eigen::MatrixXd& projections,
                                    const ErasurePattern& erasures);

// `iterations` applications of W <- P W.
Eigen::MatrixXd consensus_run(const ConsensusWeights& weights,
                              Eigen::MatrixXd state, int iterations);

// N * (average of the delivered queried rows of the consensus state).
CompressionOutcome consensus_sink_estimate(const Eigen::MatrixXd& state,
                                           int iterations,
                                           const std::vector<int>& queried,
                                           const ErasurePattern& erasures);

DisagreementReport consensus_disagreement(const ConsensusWeights& weights,
                                          const Eigen::MatrixXd& initial,
                                          const Eigen::MatrixXd& state,
                                          int iterations);

}  // namespace dcs
