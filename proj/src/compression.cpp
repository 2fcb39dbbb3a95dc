#include "dcs/compression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace dcs {

MeasurementEnsemble sample_ensemble(int m, int n, Rng& rng, bool allow_large_m) {
  if (m < 1) throw std::invalid_argument("sample_ensemble: m must be >= 1");
  if (n < 1) throw std::invalid_argument("sample_ensemble: n must be >= 1");
  if (m > n) throw std::invalid_argument("sample_ensemble: m > n is not a compression");
  if (!allow_large_m && 2 * m > n)
    throw std::invalid_argument(
        "sample_ensemble: m > n/2 leaves the compressive regime (set allow_large_m to override)");

  MeasurementEnsemble ens;
  ens.m = m;
  ens.n = n;
  ens.matrix.resize(m, n);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) ens.matrix(i, j) = sigma * rng.normal();
  return ens;
}

Eigen::MatrixXd local_projections(const MeasurementEnsemble& ensemble,
                                  const Observation& observation) {
  if (observation.values.size() != ensemble.n)
    throw std::invalid_argument("local_projections: observation length != ensemble width");
  // w_k = a_k z_k stacked as rows: W0 = diag(z) A^T.
  return observation.values.asDiagonal() * ensemble.matrix.transpose();
}

ErasurePattern erase_packets(const std::vector<int>& senders, double p, Rng& rng) {
  if (senders.empty()) throw std::invalid_argument("erase_packets: no senders");
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("erase_packets: p must be in [0,1)");

  ErasurePattern pattern;
  pattern.sent = senders;
  pattern.erasure_prob = p;
  // Resample until at least one packet survives; conditions the pattern on
  // >= 1 delivery (zero-truncated erasure count).
  do {
    pattern.delivered.clear();
    for (const int s : senders)
      if (rng.uniform() >= p) pattern.delivered.push_back(s);
  } while (pattern.delivered.empty());
  return pattern;
}

CompressionOutcome cluster_compress(const ClusterPlan& plan,
                                    const Eigen::MatrixXd& projections,
                                    const ErasurePattern& erasures) {
  if (erasures.sent != plan.heads)
    throw std::invalid_argument("cluster_compress: erasure pattern is not over the clusterheads");
  if (erasures.delivered.empty())
    throw std::invalid_argument("cluster_compress: no delivered clusterheads");

  std::unordered_map<int, int> head_to_cluster;
  for (size_t i = 0; i < plan.heads.size(); ++i) head_to_cluster[plan.heads[i]] = static_cast<int>(i);

  CompressionOutcome out;
  out.mode = CompressionMode::clustering;
  out.iterations = 0;
  out.erasures = erasures;
  out.vector = Eigen::VectorXd::Zero(projections.cols());
  for (const int head : erasures.delivered) {
    const auto it = head_to_cluster.find(head);
    if (it == head_to_cluster.end())
      throw std::invalid_argument("cluster_compress: delivered node is not a clusterhead");
    for (const int member : plan.clusters[it->second])
      out.vector += projections.row(member).transpose();
  }
  return out;
}

Eigen::MatrixXd consensus_run(const ConsensusWeights& weights,
                              Eigen::MatrixXd state, int iterations) {
  if (iterations < 0) throw std::invalid_argument("consensus_run: iterations must be >= 0");
  if (state.rows() != weights.matrix.rows())
    throw std::invalid_argument("consensus_run: state height != network size");
  for (int i = 0; i < iterations; ++i) state = weights.matrix * state;
  return state;
}

CompressionOutcome consensus_sink_estimate(const Eigen::MatrixXd& state,
                                           int iterations,
                                           const std::vector<int>& queried,
                                           const ErasurePattern& erasures) {
  if (queried.empty()) throw std::invalid_argument("consensus_sink_estimate: no queried nodes");
  if (erasures.sent != queried)
    throw std::invalid_argument("consensus_sink_estimate: erasure pattern is not over the queried set");
  if (erasures.delivered.empty())
    throw std::invalid_argument("consensus_sink_estimate: no delivered packets");

  CompressionOutcome out;
  out.mode = CompressionMode::consensus;
  out.iterations = iterations;
  out.erasures = erasures;
  out.queried = queried;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(state.cols());
  for (const int k : erasures.delivered) mean += state.row(k).transpose();
  mean /= static_cast<double>(erasures.delivered.size());
  out.vector = static_cast<double>(state.rows()) * mean;
  return out;
}

DisagreementReport consensus_disagreement(const ConsensusWeights& weights,
                                          const Eigen::MatrixXd& initial,
                                          const Eigen::MatrixXd& state,
                                          int iterations) {
  const Eigen::Index n = weights.matrix.rows();
  if (initial.rows() != n || state.rows() != n || initial.cols() != state.cols())
    throw std::invalid_argument("consensus_disagreement: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(weights.matrix);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("consensus_disagreement: eigen-decomposition failed");
  const Eigen::VectorXd mu = eig.eigenvalues();  // ascending; mu(n-1) = 1

  const Eigen::Index cols = initial.cols();
  DisagreementReport report;
  report.direct.resize(cols);
  report.eigen_expansion.resize(cols);
  report.decay_bound.resize(cols);

  const double mu2 = weights.mu2_numeric;
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double mean0 = initial.col(c).mean();
    const Eigen::VectorXd dev_i = state.col(c).array() - mean0;
    report.direct(c) = dev_i.squaredNorm();

    // alpha = Q^T w(0); the component along the top eigenvector (the average)
    // is excluded from the expansion.
    const Eigen::VectorXd alpha = eig.eigenvectors().transpose() * initial.col(c);
    double expansion = 0.0;
    for (Eigen::Index k = 0; k < n - 1; ++k)
      expansion += std::pow(mu(k), 2 * iterations) * alpha(k) * alpha(k);
    report.eigen_expansion(c) = expansion;

    const double initial_disagreement =
        (initial.col(c).array() - mean0).matrix().squaredNorm();
    report.decay_bound(c) = std::pow(mu2, 2 * iterations) * initial_disagreement;
  }
  return report;
}

}  // namespace dcs
