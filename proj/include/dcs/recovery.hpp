#pragma once

#include <Eigen/Dense>

namespace dcs {

// BPDN instance: minimize ||theta||_1 subject to ||A T^-1 theta - y||_2 <= epsilon,
// where T is the unitary DFT of size sensing.cols() and the l1 norm sums
// complex magnitudes.
struct BpdnProblem {
  Eigen::MatrixXd sensing;  // A, M x N real
  Eigen::VectorXd target;   // y, length M
  double epsilon = 0.0;
};

struct BpdnOptions {
  double tolerance = 1e-8;     // on primal/dual residuals, times max(1, ||y||)
  int max_iterations = 50000;
  double penalty = 1.0;        // initial ADMM penalty, adapted x2 / /2
};

struct BpdnSolution {
  Eigen::VectorXcd theta_star;
  Eigen::VectorXd x_star;      // real part of T^H theta_star
  double objective = 0.0;      // sum of |theta_i|
  double feasibility_gap = 0.0;  // ||A T^-1 theta - y|| - epsilon
  double imag_residual = 0.0;    // max |Im(T^H theta)| / ||x_star||
  int iterations_used = 0;
  bool converged = false;
};

// Operator-splitting solver: alternately projects the residual onto the
// epsilon-ball and applies complex magnitude shrinkage to theta.
BpdnSolution solve_bpdn(const BpdnProblem& problem, const BpdnOptions& options = {});

// Constraint radius covering the sensing-noise term ||A n||_2 with confidence
// multiplier lambda: sigma_n sqrt(N) ((1 - 1/(4M)) + lambda sqrt(1/(2M) - 1/(8M^2))).
double epsilon_reference(int n, int m, double sigma_n, double lambda);

// Radius inflation for clusterhead aggregation under erasure probability p.
double epsilon_clustering(double eps_ref, double p, int n, int radius, double snr);

struct ConsensusEpsilon {
  double epsilon = 0.0;
  double phi = 0.0;  // sampling-variance factor
};

// Radius inflation for the consensus path after `iterations` rounds with L
// queried nodes; phi combines query count, erasures, and network size.
ConsensusEpsilon epsilon_consensus(double eps_ref, double mu2, int iterations,
                                   int n, int queried, double p, double snr);

// Analysis-mode normalized bound epsilon / eps_ref.
double normalized_error_bound(double epsilon, double eps_ref);

// Which radius rule applies and its parameters; evaluates to the epsilon the
// sink should hand to the solver.
struct EpsilonPolicy {
  enum class Kind { reference, clustering, consensus };
  Kind kind = Kind::reference;
  double lambda = 2.0;
  int n = 0;
  int m = 0;
  double sigma_n = 0.0;
  // clustering / consensus parameters
  double p = 0.0;
  double snr = 0.0;
  int radius = 0;
  double mu2 = 0.0;
  int iterations = 0;
  int queried = 0;

  double epsilon() const;
};

}  // namespace dcs
