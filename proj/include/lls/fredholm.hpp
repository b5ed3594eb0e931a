#pragma once

// Probabilities E(l; lambda) that an interval of length lambda of the unit
// density sine process holds exactly l points, from the Nystrom
// discretization of the sine kernel.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lls/error.hpp"
#include "lls/quadrature.hpp"

namespace lls {

inline double sine_kernel(double x, double y) {
  const double d = std::numbers::pi * (x - y);
  return std::fabs(d) < 1e-8 ? 1.0 - d * d / 6.0 : std::sin(d) / d;
}

/// Eigenvalues of sqrt(w_i) K(x_i, x_j) sqrt(w_j) on [0, lambda], ascending.
inline Eigen::VectorXd sine_kernel_eigenvalues(double lambda, std::size_t quad_order) {
  const auto q = gauss_legendre(quad_order, 0.0, lambda);
  const auto n = static_cast<Eigen::Index>(quad_order);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = std::sqrt(q.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double wj = std::sqrt(q.weights[static_cast<std::size_t>(j)]);
      a(i, j) = a(j, i) = wi * sine_kernel(q.nodes[static_cast<std::size_t>(i)], q.nodes[static_cast<std::size_t>(j)]) * wj;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("sine kernel eigensolver did not converge");
  return es.eigenvalues();
}

/// E(l; lambda) for l = 0..ell_max. The generating function
/// det(1 - (1 - x) K) = prod_i ((1 - mu_i) + mu_i x) is expanded directly;
/// every factor has nonnegative coefficients, so no cancellation occurs even
/// when mu_i is within rounding of 1.
inline std::vector<double> fredholm_counts(double lambda, std::size_t ell_max, std::size_t quad_order = 60) {
  if (!(lambda >= 0.0) || lambda > 20.0) throw ArgumentError("fredholm_counts needs 0 <= lambda <= 20");
  if (quad_order < 40) throw ArgumentError("quad_order must be at least 40");
  std::vector<double> coef(ell_max + 1, 0.0);
  coef[0] = 1.0;
  if (lambda == 0.0) return coef;
  const auto mu = sine_kernel_eigenvalues(lambda, quad_order);
  for (Eigen::Index i = mu.size() - 1; i >= 0; --i) {
    double m = mu(i);
    if (m > 1.0 + 1e-10 || m < -1e-10)
      throw PrecisionError("sine kernel eigenvalue " + std::to_string(m) + " outside [0, 1]; raise quad_order");
    m = std::clamp(m, 0.0, 1.0);
    for (std::size_t l = ell_max; l > 0; --l) coef[l] = (1.0 - m) * coef[l] + m * coef[l - 1];
    coef[0] *= 1.0 - m;
  }
  return coef;
}

}  // namespace lls
