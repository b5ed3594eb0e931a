#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lls/error.hpp"

namespace lls {

struct QuadratureRule {
  std::vector<double> nodes, weights;
};

/// n-point Gauss-Legendre rule on [a, b] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0) {
  if (n == 0) throw ArgumentError("Gauss-Legendre rule needs n >= 1");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  const auto nn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const auto kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = nn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = mid - half * x;
    q.nodes[n - 1 - i] = mid + half * x;
    q.weights[i] = q.weights[n - 1 - i] = half * w;
  }
  return q;
}

}  // namespace lls
