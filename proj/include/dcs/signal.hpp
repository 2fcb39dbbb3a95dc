#pragma once

#include <Eigen/Dense>

#include "dcs/rng.hpp"

namespace dcs {

// Spatial field sampled at N equispaced nodes. The spectrum is the unitary
// DFT of the samples and carries exactly k_sparsity nonzero bins.
struct SpatialSignal {
  int n = 0;
  int k_sparsity = 0;
  Eigen::VectorXd samples;    // x, real
  Eigen::VectorXcd spectrum;  // theta = T x
  double energy = 0.0;        // E_X = sum |x_k|^2
};

// Noisy per-node measurement z = x + n.
struct Observation {
  Eigen::VectorXd values;
  double noise_variance = 0.0;
  double snr = 0.0;  // E_X / (N * sigma_n^2); +inf for noise-free
};

// Unitary DFT matrix T, T_ml = exp(-j 2*pi*m*l/N) / sqrt(N).
Eigen::MatrixXcd dft_matrix(int n);

// theta = T x. Norm-preserving; inverse is the conjugate transpose.
Eigen::VectorXcd dft_forward(const Eigen::VectorXd& x);

// x = T^H theta (returned with its imaginary part, callers decide how to
// treat the residue).
Eigen::VectorXcd dft_inverse(const Eigen::VectorXcd& spectrum);

// Draws a strictly k-sparse conjugate-symmetric spectrum and returns the
// corresponding real signal, rescaled so the energy is hit exactly.
// Even k uses k/2 conjugate pairs; odd k additionally places the DC bin.
SpatialSignal synthesize_sparse_signal(int n, int k, double energy, Rng& rng);

// Adds i.i.d. Gaussian sensing noise of the given variance.
Observation observe(const SpatialSignal& signal, double noise_variance, Rng& rng);

// Nonzero count of a spectrum at the relative threshold 1e-9 * max|theta|.
int spectral_support_size(const Eigen::VectorXcd& spectrum);

}  // namespace dcs
