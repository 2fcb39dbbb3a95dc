#include "dcs/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcs {

NetworkTopology build_line_network(int n, int radius) {
  if (n < 2) throw std::invalid_argument("build_line_network: n must be >= 2");
  if (radius < 1) throw std::invalid_argument("build_line_network: radius must be >= 1");

  NetworkTopology topo;
  topo.n = n;
  topo.radius = radius;
  topo.adjacency = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= i + radius && j < n; ++j) {
      topo.adjacency(i, j) = 1;
      topo.adjacency(j, i) = 1;
    }
  }
  topo.laplacian = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double degree = topo.adjacency.row(i).sum();
    topo.laplacian(i, i) = degree;
    for (int j = 0; j < n; ++j)
      if (topo.adjacency(i, j)) topo.laplacian(i, j) = -1.0;
  }
  return topo;
}

ClusterPlan form_clusters(const NetworkTopology& topology) {
  const int n = topology.n;
  const int width = 2 * topology.radius + 1;
  ClusterPlan plan;
  for (int start = 0; start < n; start += width) {
    const int end = std::min(start + width, n);  // last cluster may be short
    std::vector<int> members;
    members.reserve(end - start);
    for (int k = start; k < end; ++k) members.push_back(k);
    // Center of a full cluster; lower median when the boundary cluster is short.
    plan.heads.push_back(start + (end - start - 1) / 2);
    plan.clusters.push_back(std::move(members));
  }
  return plan;
}

int stdma_delay(int n, int radius) {
  if (n < 2 || radius < 1) throw std::invalid_argument("stdma_delay: invalid n or radius");
  return 2 * radius < n ? 2 * radius : n - 1;
}

double sink_cost(int transmitters, double unit_cost) {
  if (transmitters < 1) throw std::invalid_argument("sink_cost: need at least one transmitter");
  if (!(unit_cost > 0.0)) throw std::invalid_argument("sink_cost: unit cost must be positive");
  return unit_cost * transmitters;
}

ConsensusWeights consensus_weights(const NetworkTopology& topology,
                                   std::optional<double> step_size) {
  const int n = topology.n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(topology.laplacian);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("consensus_weights: eigen-decomposition failed");
  const Eigen::VectorXd lam = eig.eigenvalues();  // ascending, lam(0) ~ 0
  const double lambda2 = lam(1);
  const double lambda_max = lam(n - 1);
  if (lambda2 <= 1e-9 * lambda_max)
    throw std::invalid_argument("consensus_weights: graph is disconnected");

  double xi;
  if (step_size) {
    xi = *step_size;
    if (!(xi > 0.0) || !(xi < 2.0 / lambda_max))
      throw std::invalid_argument(
          "consensus_weights: step size outside the stability range (0, 2/lambda_max)");
  } else {
    xi = 2.0 / (lambda2 + lambda_max);
  }

  ConsensusWeights w;
  w.matrix = Eigen::MatrixXd::Identity(n, n) - xi * topology.laplacian;
  w.step_size = xi;
  w.mu2_numeric = 1.0 - xi * lambda2;
  w.mu2_bound = std::cos(std::numbers::pi * topology.radius / (2.0 * n));
  return w;
}

}  // namespace dcs
