#include "dcs/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace dcs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Eigen::MatrixXcd dft_matrix(int n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: n must be >= 1");
  Eigen::MatrixXcd t(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < n; ++m) {
    for (int l = 0; l < n; ++l) {
      // Reduce m*l mod N before forming the angle; keeps the argument small.
      const long long phase = (static_cast<long long>(m) * l) % n;
      t(m, l) = std::polar(scale, -kTwoPi * static_cast<double>(phase) / n);
    }
  }
  return t;
}

Eigen::VectorXcd dft_forward(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw std::invalid_argument("dft_forward: empty input");
  return dft_matrix(static_cast<int>(x.size())) * x.cast<std::complex<double>>();
}

Eigen::VectorXcd dft_inverse(const Eigen::VectorXcd& spectrum) {
  if (spectrum.size() == 0) throw std::invalid_argument("dft_inverse: empty input");
  return dft_matrix(static_cast<int>(spectrum.size())).adjoint() * spectrum;
}

int spectral_support_size(const Eigen::VectorXcd& spectrum) {
  const double peak = spectrum.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0;
  const double threshold = 1e-9 * peak;
  int count = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    if (std::abs(spectrum(i)) > threshold) ++count;
  return count;
}

SpatialSignal synthesize_sparse_signal(int n, int k, double energy, Rng& rng) {
  if (n < 1) throw std::invalid_argument("synthesize_sparse_signal: n must be >= 1");
  if (k < 1 || k > n)
    throw std::invalid_argument("synthesize_sparse_signal: need 1 <= k <= n");
  if (!(energy > 0.0))
    throw std::invalid_argument("synthesize_sparse_signal: energy must be positive");

  // Bins m=1..n_pairs pair with n-m; DC (and Nyquist for even n) are the
  // self-conjugate bins. Odd k places DC, even k uses pairs only.
  const int n_pairs = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  const bool use_dc = (k % 2 == 1);
  const int pairs_needed = k / 2;
  if (pairs_needed > n_pairs)
    throw std::invalid_argument(
        "synthesize_sparse_signal: k not realizable as a conjugate-symmetric support");

  Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(n);
  std::vector<int> support;
  const std::vector<int> chosen = rng.sample_without_replacement(n_pairs, pairs_needed);
  for (const int idx : chosen) {
    const int m = idx + 1;
    const double mag = rng.uniform(0.5, 1.5);
    const double phase = rng.uniform(0.0, kTwoPi);
    theta(m) = std::polar(mag, phase);
    theta(n - m) = std::conj(theta(m));
    support.push_back(m);
    support.push_back(n - m);
  }
  if (use_dc) {
    const double mag = rng.uniform(0.5, 1.5);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    theta(0) = std::complex<double>(sign * mag, 0.0);
    support.push_back(0);
  }

  theta *= std::sqrt(energy / theta.squaredNorm());

  SpatialSignal out;
  out.n = n;
  out.k_sparsity = k;
  out.spectrum = theta;
  // Inverse transform evaluated over the support only; the imaginary parts
  // cancel by conjugate symmetry.
  out.samples.resize(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int l = 0; l < n; ++l) {
    std::complex<double> acc(0.0, 0.0);
    for (const int m : support) {
      const long long phase = (static_cast<long long>(m) * l) % n;
      acc += theta(m) * std::polar(1.0, kTwoPi * static_cast<double>(phase) / n);
    }
    out.samples(l) = scale * acc.real();
  }
  out.energy = energy;
  return out;
}

Observation observe(const SpatialSignal& signal, double noise_variance, Rng& rng) {
  if (noise_variance < 0.0)
    throw std::invalid_argument("observe: noise variance must be nonnegative");
  Observation obs;
  obs.values = signal.samples;
  obs.noise_variance = noise_variance;
  if (noise_variance > 0.0) {
    const double sigma = std::sqrt(noise_variance);
    for (Eigen::Index i = 0; i < obs.values.size(); ++i)
      obs.values(i) += sigma * rng.normal();
    obs.snr = signal.energy / (signal.n * noise_variance);
  } else {
    obs.snr = std::numeric_limits<double>::infinity();
  }
  return obs;
}

}  // namespace dcs
