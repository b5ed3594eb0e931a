#pragma once

// Seeded samplers: circular beta ensembles (CMV construction, plus a Haar QR
// path for beta = 2) and Poisson spectra on the circle and on the line.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lls/cmv.hpp"
#include "lls/error.hpp"
#include "lls/linalg.hpp"
#include "lls/random.hpp"
#include "lls/spectrum.hpp"

namespace lls {

enum class Method { cmv, haar_qr };

inline const char* to_string(Method m) { return m == Method::cmv ? "cmv" : "haar_qr"; }

struct EnsembleConfig {
  int beta = 2;  // 0 (Poisson), 1, 2 or 4
  std::size_t n_levels = 64;
  std::uint64_t seed = 0;
  Method method = Method::cmv;

  void validate() const {
    if (beta != 0 && beta != 1 && beta != 2 && beta != 4)
      throw ArgumentError("beta must be one of 0, 1, 2, 4 (got " + std::to_string(beta) + ")");
    if (n_levels < 2) throw ArgumentError("ensemble needs N >= 2");
    if (beta != 0 && method == Method::haar_qr && beta != 2)
      throw ArgumentError("haar_qr sampling is only available for beta = 2");
  }
};

/// Haar unitary from a complex Ginibre matrix: Q of its QR factorization with
/// the phases of diag(R) divided out.
inline Eigen::MatrixXcd haar_unitary(std::size_t n, Engine& eng) {
  const auto m = static_cast<Eigen::Index>(n);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd z(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) {
      const double re = gauss(eng);
      z(i, j) = {re, gauss(eng)};
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

namespace detail {

inline std::vector<double> cbe_angles(const EnsembleConfig& cfg, std::uint64_t seed) {
  auto eng = make_engine(seed);
  if (cfg.method == Method::haar_qr) return linalg::unitary_eigenangles(haar_unitary(cfg.n_levels, eng));
  const auto alpha = cmv::sample_verblunsky(static_cast<double>(cfg.beta), cfg.n_levels, eng);
  return cmv::PhaseSolver(alpha).eigenangles();
}

}  // namespace detail

/// N independent uniform angles, sorted. Uses normalized partial sums of N+1
/// exponentials, which have the law of uniform order statistics.
inline CircularSpectrum sample_poisson_circle(std::size_t n_levels, std::uint64_t seed) {
  if (n_levels < 1) throw ArgumentError("Poisson circle needs N >= 1");
  auto eng = make_engine(seed);
  std::vector<double> acc(n_levels + 1);
  double sum = 0.0;
  for (auto& a : acc) {
    sum += -std::log(uniform_open(eng));
    a = sum;
  }
  std::vector<double> angles(n_levels);
  for (std::size_t k = 0; k < n_levels; ++k) {
    double a = two_pi * (acc[k] / sum);
    if (a >= two_pi) a = std::nextafter(two_pi, 0.0);
    angles[k] = a;
  }
  return CircularSpectrum(std::move(angles));
}

/// Circular ensemble sample. beta = 0 gives the Poisson circle. Solver
/// failures are retried with derived seeds before SamplerFailure is thrown.
inline CircularSpectrum sample_cbe(const EnsembleConfig& cfg) {
  cfg.validate();
  if (cfg.beta == 0) return sample_poisson_circle(cfg.n_levels, cfg.seed);
  constexpr int attempts = 4;
  std::string last;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? cfg.seed : derive_seed(cfg.seed, 0xfa11ULL + attempt);
    try {
      auto angles = detail::cbe_angles(cfg, s);
      if (angles.size() != cfg.n_levels) throw SolverError("wrong number of eigen-angles");
      for (std::size_t k = 1; k < angles.size(); ++k)
        if (angles[k] < angles[k - 1] - 1e-10) throw SolverError("eigen-angles not ordered");
      return CircularSpectrum(std::move(angles));
    } catch (const SolverError& e) {
      last = e.what();
    }
  }
  throw SamplerFailure(last, cfg.seed);
}

/// Cumulative sums of iid exponential gaps with the given mean.
inline LineSpectrum sample_poisson_line(double mean_gap, std::size_t count, std::uint64_t seed) {
  if (!(mean_gap > 0.0)) throw ArgumentError("mean gap must be positive");
  if (count < 2) throw ArgumentError("Poisson line needs at least 2 levels");
  auto eng = make_engine(seed);
  std::vector<double> levels(count);
  double x = 0.0;
  for (auto& v : levels) {
    x += -mean_gap * std::log(uniform_open(eng));
    v = x;
  }
  return LineSpectrum(std::move(levels), mean_gap == 1.0 ? Scale::unfolded : Scale::raw);
}

}  // namespace lls
