#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace dcs {

// Line network of n nodes at unit spacing; nodes are adjacent iff their
// index distance is at most `radius` (disc connectivity).
struct NetworkTopology {
  int n = 0;
  int radius = 0;
  Eigen::MatrixXi adjacency;  // symmetric 0/1, zero diagonal
  Eigen::MatrixXd laplacian;  // degree - adjacency
};

// Contiguous partition into ceil(n / (2R+1)) clusters, head at each center.
struct ClusterPlan {
  std::vector<int> heads;
  std::vector<std::vector<int>> clusters;
};

// Consensus weight matrix P = I - xi*L together with its spectral data.
struct ConsensusWeights {
  Eigen::MatrixXd matrix;
  double step_size = 0.0;
  double mu2_numeric = 0.0;  // second largest eigenvalue of P
  double mu2_bound = 0.0;    // cos(pi*R / (2N))
};

NetworkTopology build_line_network(int n, int radius);

ClusterPlan form_clusters(const NetworkTopology& topology);

// S-TDMA slots needed for all local broadcasts: 2R when 2R < N, else N-1.
int stdma_delay(int n, int radius);

double sink_cost(int transmitters, double unit_cost);

// When step_size is omitted, uses the fastest-mixing constant step
// xi* = 2 / (lambda_2 + lambda_N) of the Laplacian.
ConsensusWeights consensus_weights(const NetworkTopology& topology,
                                   std::optional<double> step_size = std::nullopt);

}  // namespace dcs
