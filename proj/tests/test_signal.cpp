#include <doctest.h>

#include <cmath>
#include <complex>

#include "dcs/signal.hpp"

using namespace dcs;

TEST_CASE("dft of a constant is DC-only") {
  const int n = 16;
  const double c = 2.5;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(n, c);
  const Eigen::VectorXcd theta = dft_forward(x);
  CHECK(std::abs(theta(0) - std::complex<double>(c * std::sqrt(double(n)), 0.0)) < 1e-12);
  for (int i = 1; i < n; ++i) CHECK(std::abs(theta(i)) < 1e-12);
}

TEST_CASE("dft is unitary and round-trips") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(60));
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.normal();
    const Eigen::VectorXcd theta = dft_forward(x);
    CHECK(theta.norm() == doctest::Approx(x.norm()).epsilon(1e-12));

    const Eigen::VectorXcd back = dft_inverse(theta);
    CHECK((back.real() - x).norm() < 1e-10 * x.norm());
    CHECK(back.imag().cwiseAbs().maxCoeff() < 1e-10 * x.norm());
  }
}

TEST_CASE("round-trip through a random conjugate-symmetric spectrum") {
  Rng rng(77);
  const int n = 24;
  Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(n);
  theta(0) = rng.normal();
  theta(n / 2) = rng.normal();
  for (int m = 1; m < n / 2; ++m) {
    theta(m) = std::complex<double>(rng.normal(), rng.normal());
    theta(n - m) = std::conj(theta(m));
  }
  const Eigen::VectorXcd x = dft_inverse(theta);
  CHECK(x.imag().cwiseAbs().maxCoeff() < 1e-10 * x.real().norm());
  const Eigen::VectorXcd reforward = dft_forward(x.real());
  CHECK((reforward - theta).norm() < 1e-10 * theta.norm());
}

TEST_CASE("dft rejects empty input") {
  CHECK_THROWS_AS(dft_forward(Eigen::VectorXd()), std::invalid_argument);
  CHECK_THROWS_AS(dft_inverse(Eigen::VectorXcd()), std::invalid_argument);
}

TEST_CASE("synthesized signal hits the requested energy and sparsity") {
  Rng rng(5);
  const SpatialSignal sig = synthesize_sparse_signal(100, 4, 3.0, rng);
  CHECK(sig.samples.squaredNorm() == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(spectral_support_size(sig.spectrum) == 4);
  // Parseval, T unitary
  CHECK(sig.spectrum.squaredNorm() == doctest::Approx(sig.samples.squaredNorm()).epsilon(1e-10));
  // spectrum really is the transform of the samples
  CHECK((dft_forward(sig.samples) - sig.spectrum).norm() < 1e-9 * sig.spectrum.norm());
}

TEST_CASE("odd sparsity lands on the DC bin; k=1 gives a constant signal") {
  Rng rng(9);
  const SpatialSignal sig = synthesize_sparse_signal(8, 1, 2.0, rng);
  CHECK(spectral_support_size(sig.spectrum) == 1);
  CHECK(std::abs(sig.spectrum(0)) > 0.0);
  const double expected = std::sqrt(2.0 / 8.0);
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(sig.samples(i)) == doctest::Approx(expected).epsilon(1e-12));
  // all samples share one value
  for (int i = 1; i < 8; ++i)
    CHECK(sig.samples(i) == doctest::Approx(sig.samples(0)).epsilon(1e-12));
}

TEST_CASE("synthesis is deterministic under a fixed seed") {
  Rng a(1234), b(1234);
  const SpatialSignal s1 = synthesize_sparse_signal(50, 6, 1.5, a);
  const SpatialSignal s2 = synthesize_sparse_signal(50, 6, 1.5, b);
  for (int i = 0; i < 50; ++i) {
    CHECK(s1.samples(i) == s2.samples(i));
    CHECK(s1.spectrum(i) == s2.spectrum(i));
  }
}

TEST_CASE("synthesis rejects unrealizable requests") {
  Rng rng(1);
  CHECK_THROWS_AS(synthesize_sparse_signal(100, 101, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_sparse_signal(100, 0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_sparse_signal(100, 1, -1.0, rng), std::invalid_argument);
  // even k has only floor(n/2)-1 conjugate pairs available
  CHECK_THROWS_AS(synthesize_sparse_signal(100, 100, 1.0, rng), std::invalid_argument);
  CHECK_NOTHROW(synthesize_sparse_signal(100, 98, 1.0, rng));
  CHECK_NOTHROW(synthesize_sparse_signal(100, 99, 1.0, rng));
}

TEST_CASE("observation snr and noise-free behaviour") {
  Rng rng(3);
  const SpatialSignal sig = synthesize_sparse_signal(100, 4, 3.0, rng);

  const Observation noisy = observe(sig, 0.01, rng);
  CHECK(noisy.snr == doctest::Approx(3.0).epsilon(1e-12));

  const Observation clean = observe(sig, 0.0, rng);
  for (int i = 0; i < 100; ++i) CHECK(clean.values(i) == sig.samples(i));

  CHECK_THROWS_AS(observe(sig, -0.01, rng), std::invalid_argument);
}

TEST_CASE("observation noise variance matches over many trials") {
  Rng rng(17);
  const SpatialSignal sig = synthesize_sparse_signal(100, 4, 3.0, rng);
  const double sigma2 = 0.01;
  double sum = 0.0, sum_sq = 0.0;
  long count = 0;
  for (int t = 0; t < 10000; ++t) {
    const Observation obs = observe(sig, sigma2, rng);
    for (int i = 0; i < 100; ++i) {
      const double d = obs.values(i) - sig.samples(i);
      sum += d;
      sum_sq += d * d;
      ++count;
    }
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  CHECK(var == doctest::Approx(sigma2).epsilon(0.05));
}
