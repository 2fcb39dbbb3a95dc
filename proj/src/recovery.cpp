#include "dcs/recovery.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dcs/signal.hpp"

namespace dcs {

namespace {

// Largest eigenvalue of A^T A by power iteration on A A^T (the smaller Gram).
double squared_operator_norm(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd gram = a * a.transpose();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(gram.rows()).normalized();
  double value = 0.0;
  for (int i = 0; i < 200; ++i) {
    v = gram * v;
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;
    if (std::abs(nv - value) <= 1e-13 * nv && i > 4) return nv;
    value = nv;
  }
  return value;
}

// Elementwise complex magnitude shrinkage theta * max(0, 1 - kappa/|theta|).
void shrink_in_place(Eigen::VectorXcd& v, double kappa) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    v(i) = mag > kappa ? v(i) * ((mag - kappa) / mag) : std::complex<double>(0.0, 0.0);
  }
}

}  // namespace

BpdnSolution solve_bpdn(const BpdnProblem& problem, const BpdnOptions& options) {
  const Eigen::Index m = problem.sensing.rows();
  const Eigen::Index n = problem.sensing.cols();
  if (problem.target.size() != m)
    throw std::invalid_argument("solve_bpdn: target length != sensing rows");
  if (problem.epsilon < 0.0)
    throw std::invalid_argument("solve_bpdn: epsilon must be nonnegative");
  if (!(options.tolerance > 0.0) || options.max_iterations < 1 || !(options.penalty > 0.0))
    throw std::invalid_argument("solve_bpdn: bad solver options");

  // Effective operator F = A T^H; right-multiplying by a unitary leaves the
  // spectral norm at ||A||.
  const Eigen::MatrixXcd t = dft_matrix(static_cast<int>(n));
  const Eigen::MatrixXcd f = problem.sensing.cast<std::complex<double>>() * t.adjoint();
  const Eigen::VectorXcd y = problem.target.cast<std::complex<double>>();

  const double op2 = squared_operator_norm(problem.sensing) * (1.0 + 1e-9);
  const double grad_step = op2 > 0.0 ? 0.999 / op2 : 1.0;  // tau * rho

  double rho = options.penalty;
  Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXcd f_theta = Eigen::VectorXcd::Zero(m);

  const double scale = std::max(1.0, problem.target.norm());
  const double tol = options.tolerance * scale;

  BpdnSolution sol;
  int it = 0;
  for (it = 1; it <= options.max_iterations; ++it) {
    // Project the shifted residual onto the epsilon-ball around y.
    const Eigen::VectorXcd v = f_theta + u;
    const Eigen::VectorXcd dv = v - y;
    const double ndv = dv.norm();
    const Eigen::VectorXcd s_new =
        ndv > problem.epsilon ? (y + dv * (problem.epsilon / ndv)).eval() : v;

    // Proximal-linearized theta step with complex shrinkage.
    theta -= grad_step * (f.adjoint() * (f_theta - s_new + u));
    shrink_in_place(theta, grad_step / rho);
    f_theta = f * theta;

    const Eigen::VectorXcd r = f_theta - s_new;
    u += r;

    const double dual_residual = rho * (f.adjoint() * (s_new - s)).norm();
    s = s_new;
    const double primal_residual = r.norm();
    if (primal_residual < tol && dual_residual < tol) {
      sol.converged = true;
      break;
    }
    if (it % 50 == 0) {
      // Keep the residuals balanced; u carries 1/rho scaling.
      if (primal_residual > 10.0 * dual_residual && rho < 1e10) {
        rho *= 2.0;
        u *= 0.5;
      } else if (dual_residual > 10.0 * primal_residual && rho > 1e-10) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  sol.iterations_used = std::min(it, options.max_iterations);
  sol.theta_star = theta;
  const Eigen::VectorXcd x_complex = t.adjoint() * theta;
  sol.x_star = x_complex.real();
  const double x_norm = sol.x_star.norm();
  sol.imag_residual = x_norm > 0.0 ? x_complex.imag().cwiseAbs().maxCoeff() / x_norm
                                   : x_complex.imag().cwiseAbs().maxCoeff();
  sol.objective = theta.cwiseAbs().sum();
  sol.feasibility_gap = (f * theta - y).norm() - problem.epsilon;
  return sol;
}

double epsilon_reference(int n, int m, double sigma_n, double lambda) {
  if (n < 1 || m < 1) throw std::invalid_argument("epsilon_reference: n and m must be >= 1");
  if (sigma_n < 0.0) throw std::invalid_argument("epsilon_reference: sigma_n must be >= 0");
  if (lambda < 0.0) throw std::invalid_argument("epsilon_reference: lambda must be >= 0");
  const double md = static_cast<double>(m);
  return sigma_n * std::sqrt(static_cast<double>(n)) *
         ((1.0 - 1.0 / (4.0 * md)) +
          lambda * std::sqrt(1.0 / (2.0 * md) - 1.0 / (8.0 * md * md)));
}

double epsilon_clustering(double eps_ref, double p, int n, int radius, double snr) {
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("epsilon_clustering: p must be in [0,1)");
  if (n < 1 || radius < 1)
    throw std::invalid_argument("epsilon_clustering: invalid n or radius");
  const int clusters = (n + 2 * radius) / (2 * radius + 1);  // ceil(n / (2R+1))
  const double p_head = p == 0.0 ? 0.0 : 1.0 - (1.0 - p) / (1.0 - std::pow(p, clusters));
  return eps_ref * std::sqrt(1.0 - p_head * (1.0 - snr));
}

ConsensusEpsilon epsilon_consensus(double eps_ref, double mu2, int iterations,
                                   int n, int queried, double p, double snr) {
  if (n < 2) throw std::invalid_argument("epsilon_consensus: n must be >= 2");
  if (queried < 1 || queried > n)
    throw std::invalid_argument("epsilon_consensus: queried count must be in [1, n]");
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("epsilon_consensus: p must be in [0,1)");
  if (!(mu2 > 0.0) || !(mu2 < 1.0))
    throw std::invalid_argument("epsilon_consensus: mu2 must be in (0,1)");
  if (iterations < 0)
    throw std::invalid_argument("epsilon_consensus: iterations must be >= 0");

  const double nd = static_cast<double>(n);
  const double ld = static_cast<double>(queried);
  const double truncation = 1.0 - std::pow(p, queried);  // 1 - p^L
  const double mean_delivered = ld * (1.0 - p) / truncation;  // Lbar
  ConsensusEpsilon out;
  out.phi = (nd * truncation / (ld * (1.0 - p))) * ((nd - mean_delivered) / (nd - 1.0));
  out.epsilon =
      eps_ref * (1.0 + std::pow(mu2, iterations) * std::sqrt((1.0 + snr) * out.phi));
  return out;
}

double normalized_error_bound(double epsilon, double eps_ref) {
  if (!(eps_ref > 0.0))
    throw std::invalid_argument("normalized_error_bound: eps_ref must be positive");
  return epsilon / eps_ref;
}

double EpsilonPolicy::epsilon() const {
  const double ref = epsilon_reference(n, m, sigma_n, lambda);
  switch (kind) {
    case Kind::reference:
      return ref;
    case Kind::clustering:
      return epsilon_clustering(ref, p, n, radius, snr);
    case Kind::consensus:
      return epsilon_consensus(ref, mu2, iterations, n, queried, p, snr).epsilon;
  }
  throw std::logic_error("EpsilonPolicy: unknown kind");
}

}  // namespace dcs
