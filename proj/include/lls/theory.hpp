#pragma once

// Reference curves for the sine_beta processes: gap probabilities, spacing
// densities and their size-biased versions, local spacing means, and the
// published constants they are compared with.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lls/error.hpp"
#include "lls/fredholm.hpp"
#include "lls/painleve.hpp"
#include "lls/spectrum.hpp"

namespace lls {

inline void check_beta(int beta, bool allow_poisson = false) {
  if (beta == 1 || beta == 2 || beta == 4 || (allow_poisson && beta == 0)) return;
  throw ArgumentError("unsupported beta " + std::to_string(beta));
}

/// Default grid: s step 1e-3, t step 2 pi 1e-3, reaching s = 5 for beta 1, 2
/// and s = 5.09 for beta 4 (which needs t = 4 pi s).
inline Sigma0Table painleve_sigma0(double t_max = 64.0, double tolerance = 1e-12, double step = two_pi * 1e-3) {
  return Sigma0Table(t_max, step, tolerance);
}

/// Shared default table, built on first use.
inline const Sigma0Table& default_sigma0() {
  static const Sigma0Table table = painleve_sigma0();
  return table;
}

/// E^(beta)(0; s) from one table point at t = 2 pi s (beta 1, 2) together
/// with the point at t = 4 pi s that beta 4 needs.
inline double gap_from_points(int beta, const Sigma0Point& p) {
  switch (beta) {
    case 2: return std::exp(p.i);
    case 1: return std::exp(-0.5 * p.j + 0.5 * p.i);
    case 4: return std::cosh(0.5 * p.j) * std::exp(0.5 * p.i);
    default: throw ArgumentError("unsupported beta " + std::to_string(beta));
  }
}

/// Argument of sigma needed for E^(beta)(0; s).
inline double sigma_argument(int beta, double s) { return (beta == 4 ? 2.0 : 1.0) * two_pi * s; }

/// Probability that an interval of length s holds no level (unit density).
inline double gap_probability(int beta, double s, const Sigma0Table& table = default_sigma0()) {
  check_beta(beta, true);
  if (!(s >= 0.0)) throw ArgumentError("gap probability needs s >= 0");
  if (beta == 0) return std::exp(-s);
  return gap_from_points(beta, table.at(sigma_argument(beta, s)));
}

/// A density sampled on s_k = k h, k = 0..K, with linear interpolation.
struct DensityTable {
  int beta = 2;
  double h = 1e-3;
  std::vector<double> values;

  double s_max() const noexcept { return h * static_cast<double>(values.size() - 1); }
  double s(std::size_t k) const noexcept { return h * static_cast<double>(k); }

  double operator()(double s) const {
    if (s < 0.0) return 0.0;
    const double x = s / h;
    const auto k = static_cast<std::size_t>(x);
    if (k + 1 >= values.size()) return k + 1 == values.size() ? values.back() : 0.0;
    const double f = x - static_cast<double>(k);
    return (1.0 - f) * values[k] + f * values[k + 1];
  }

  /// int_0^{s_max} s^power f(s) ds by the composite Simpson rule.
  double moment(int power) const {
    const std::size_t n = values.size() - 1;
    auto g = [&](std::size_t k) { return std::pow(s(k), power) * values[k]; };
    if (n % 2 != 0) throw ArgumentError("Simpson moment needs an even number of intervals");
    double acc = g(0) + g(n);
    for (std::size_t k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * g(k);
    return acc * h / 3.0;
  }
};

/// p^(beta)(s) = d^2/ds^2 E^(beta)(0; s) on s_k = k h up to s_max, from a
/// 6th-order central stencil applied to E on the table grid (h must be a
/// multiple of the table step over 2 pi). Points left of the origin come from
/// the Taylor series, whose E is analytic there. Small negative values are
/// clipped; the result must integrate to 1 with unit mean.
inline DensityTable spacing_pdf(int beta, double s_max = 5.0, const Sigma0Table& table = default_sigma0(),
                                double h = 1e-3) {
  check_beta(beta, true);
  DensityTable out{beta, h, {}};
  auto n = static_cast<std::size_t>(std::llround(s_max / h));
  if (n % 2) ++n;
  out.values.resize(n + 1);
  if (beta == 0) {
    for (std::size_t k = 0; k <= n; ++k) out.values[k] = std::exp(-out.s(k));
    return out;
  }
  const double ratio = h * two_pi / table.step();
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (std::fabs(ratio - static_cast<double>(stride)) > 1e-9 || stride == 0)
    throw ArgumentError("density step is not aligned with the sigma table");
  const std::size_t mult = beta == 4 ? 2 : 1;
  if ((n + 3) * stride * mult >= table.size()) throw ArgumentError("s_max beyond the sigma table");
  auto e = [&](long k) {
    if (k <= 0) return gap_from_points(beta, table.at(sigma_argument(beta, static_cast<double>(k) * h)));
    return gap_from_points(beta, table[static_cast<std::size_t>(k) * stride * mult]);
  };
  constexpr std::array<double, 7> c{2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};
  const double inv = 1.0 / (180.0 * h * h);
  std::vector<double> win(7);
  for (int j = 0; j < 7; ++j) win[j] = e(j - 3);
  for (std::size_t k = 0; k <= n; ++k) {
    double p = 0.0;
    for (int j = 0; j < 7; ++j) p += c[j] * win[j];
    p *= inv;
    if (p < -1e-6) throw SolverError("spacing density negative at s = " + std::to_string(out.s(k)));
    out.values[k] = std::max(p, 0.0);
    for (int j = 0; j < 6; ++j) win[j] = win[j + 1];
    win[6] = e(static_cast<long>(k) + 4);
  }
  const double mass = out.moment(0), mean = out.moment(1);
  if (std::fabs(mass - 1.0) > 1e-4 || std::fabs(mean - 1.0) > 1e-4)
    throw SolverError("spacing density normalization failed: mass " + std::to_string(mass) + ", mean " +
                      std::to_string(mean));
  return out;
}

/// p0^(beta)(s) = s p^(beta)(s), the density of the zeroth local spacing.
inline DensityTable p0_pdf(int beta, double s_max = 5.0, const Sigma0Table& table = default_sigma0(),
                           double h = 1e-3) {
  auto d = spacing_pdf(beta, s_max, table, h);
  for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] *= d.s(k);
  return d;
}

/// <s_l> = (1 + [l = 0]) int_0^inf E^(beta)(l; lambda) d lambda for the
/// Poisson process (closed form) and the sine_2 process (Fredholm counts,
/// adaptive Gauss-Kronrod on [0, l + 12]).
inline double mean_lls_theory(int beta, std::size_t ell, std::size_t quad_order = 60) {
  if (ell > 8) throw ArgumentError("mean_lls_theory supports l <= 8");
  if (beta == 0) return ell == 0 ? 2.0 : 1.0;
  if (beta != 2) throw ArgumentError("theory means are computed for beta 0 and 2 only");
  auto f = [&](double lambda) { return fredholm_counts(lambda, ell, quad_order)[ell]; };
  double err = 0.0;
  const double upper = static_cast<double>(ell) + 12.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, upper, 12, 1e-12, &err);
  if (!(err < 1e-8)) throw SolverError("mean_lls_theory quadrature did not converge (error " + std::to_string(err) + ")");
  return (ell == 0 ? 2.0 : 1.0) * v;
}

/// Published constants used as acceptance targets.
struct ReferenceConstants {
  // <s_l>, l = 0..4, for beta = 0, 1, 2, 4.
  std::map<int, std::array<double, 5>> means;
  // <s_l>/<s_0>, l = 1..3.
  std::map<int, std::array<double, 3>> ratios;
  // Mean r-ratio of consecutive spacings for beta = 1, 2, 4.
  std::map<int, double> mean_r;
  std::array<double, 5> riemann_zeros;
  std::array<double, 5> billiard;
};

inline const ReferenceConstants& reference_constants() {
  static const ReferenceConstants c{
      {{0, {2.0, 1.0, 1.0, 1.0, 1.0}},
       {1, {1.28553, 0.92267, 0.97510, 0.98856, 0.99354}},
       {2, {1.17999, 0.94449, 0.98610, 0.99404, 0.99671}},
       {4, {1.10410, 0.96536, 0.99288, 0.99702, 0.99836}}},
      {{0, {0.5, 0.5, 0.5}},
       {1, {0.71773, 0.75852, 0.76899}},
       {2, {0.80042, 0.83569, 0.84241}},
       {4, {0.87434, 0.89927, 0.90301}}},
      {{1, 1.7781}, {2, 1.3684}, {4, 1.1769}},
      {1.17846, 0.94363, 0.98568, 0.99414, 0.99651},
      {1.99812, 1.00172, 0.99986, 1.00004, 0.99960},
  };
  return c;
}

}  // namespace lls
