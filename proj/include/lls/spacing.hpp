#pragma once

// Local level spacing extraction on the circle and on the line.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "lls/error.hpp"
#include "lls/spectrum.hpp"

namespace lls {

/// Index of the left-nearest eigen-angle to phi. When phi precedes every
/// angle the wrap-around arc owns it and N-1 is returned.
inline std::size_t locate(const CircularSpectrum& spectrum, double phi) {
  if (!(phi >= 0.0 && phi < two_pi))
    throw ArgumentError("reference point " + std::to_string(phi) + " outside [0, 2pi)");
  const auto angles = spectrum.angles();
  const auto it = std::upper_bound(angles.begin(), angles.end(), phi);
  if (it != angles.begin() && *(it - 1) == phi) throw DegenerateReferencePoint(phi);
  if (it == angles.begin()) return angles.size() - 1;
  return static_cast<std::size_t>(it - angles.begin()) - 1;
}

/// Local spacings s_0..s_L around phi; L = N-1 gives the complete cyclic record.
inline LocalSpacingRecord local_spacings_circle(const CircularSpectrum& spectrum, double phi,
                                                std::size_t max_order) {
  const std::size_t n = spectrum.n_levels();
  if (max_order < 1 || max_order > n - 1)
    throw ArgumentError("local spacing order L = " + std::to_string(max_order) +
                        " outside [1, N-1] for N = " + std::to_string(n));
  const std::size_t anchor = locate(spectrum, phi);
  const auto angles = spectrum.angles();

  LocalSpacingRecord rec;
  rec.phi = phi;
  rec.anchor = anchor;
  rec.spacings.resize(max_order + 1);
  // Unwrapped angle of level anchor + k; indices past N-1 carry a 2pi.
  auto unwrapped = [&](std::size_t k) {
    const std::size_t idx = anchor + k;
    return idx < n ? angles[idx] : angles[idx - n] + two_pi;
  };
  double left = unwrapped(0);
  for (std::size_t l = 0; l <= max_order; ++l) {
    const double right = unwrapped(l + 1);
    rec.spacings[l] = right - left;
    left = right;
  }
  return rec;
}

/// Local spacings on the line: anchor is the greatest index with a level
/// strictly below phi. Needs one level below phi and L+1 above it.
inline LocalSpacingRecord local_spacings_line(const LineSpectrum& spectrum, double phi,
                                              std::size_t max_order) {
  const auto levels = spectrum.levels();
  const auto it = std::lower_bound(levels.begin(), levels.end(), phi);
  if (it != levels.end() && *it == phi) throw DegenerateReferencePoint(phi);
  const auto below = static_cast<std::size_t>(it - levels.begin());
  if (below == 0) throw WindowUnderflow(WindowSide::below, 0, 1);
  const std::size_t above = levels.size() - below;
  if (above < max_order + 1) throw WindowUnderflow(WindowSide::above, above, max_order + 1);

  LocalSpacingRecord rec;
  rec.phi = phi;
  rec.anchor = below - 1;
  rec.spacings.resize(max_order + 1);
  for (std::size_t l = 0; l <= max_order; ++l)
    rec.spacings[l] = levels[rec.anchor + l + 1] - levels[rec.anchor + l];
  return rec;
}

/// Cyclic consecutive spacings, including the wrap arc theta_0 + 2pi - theta_{N-1}.
inline ConsecutiveSpacings consecutive_spacings(const CircularSpectrum& spectrum) {
  const std::size_t n = spectrum.n_levels();
  if (n < 2) throw ArgumentError("consecutive spacings need N >= 2");
  const auto a = spectrum.angles();
  ConsecutiveSpacings out;
  out.cyclic = true;
  out.spacings.resize(n);
  for (std::size_t k = 0; k + 1 < n; ++k) out.spacings[k] = a[k + 1] - a[k];
  out.spacings[n - 1] = a[0] + two_pi - a[n - 1];
  return out;
}

/// |LHS - RHS| of the generating-function identity at phi = 0:
///   int_0^{2pi} z^{n(v)} dv  =  z^N s_0(0) + sum_{l=1}^{N-1} z^l s_l(0),
/// where n(v) is the 1-based index of the left-nearest level (N when none).
/// The left side is evaluated arc by arc, independently of the extraction path.
inline double generating_identity_residual(const CircularSpectrum& spectrum, std::complex<double> z) {
  const std::size_t n = spectrum.n_levels();
  const auto a = spectrum.angles();

  std::complex<double> zn = 1.0;
  for (std::size_t k = 0; k < n; ++k) zn *= z;

  // Integrand equals z^N on [0, theta_0) and on (theta_{N-1}, 2pi), and
  // z^{k+1} on (theta_k, theta_{k+1}).
  std::complex<double> lhs = zn * (a[0] + (two_pi - a[n - 1]));
  std::complex<double> zk = z;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    lhs += zk * (a[k + 1] - a[k]);
    zk *= z;
  }

  std::complex<double> rhs;
  if (n == 1) {
    rhs = zn * two_pi;
  } else {
    const auto rec = local_spacings_circle(spectrum, 0.0, n - 1);
    rhs = zn * rec.spacings[0];
    std::complex<double> zl = z;
    for (std::size_t l = 1; l < n; ++l) {
      rhs += zl * rec.spacings[l];
      zl *= z;
    }
  }
  return std::abs(lhs - rhs);
}

/// Size-biased estimator of the l-th mean local spacing for one spectrum:
/// (1/Delta) (1/N) sum_k s_k s_{k+l mod N}, in the same units as the spacings.
inline double size_biased_mean(const ConsecutiveSpacings& spacings, std::size_t ell) {
  const std::size_t n = spacings.size();
  if (!spacings.cyclic) throw ArgumentError("size-biased estimator needs cyclic spacings");
  if (n == 0 || ell >= n)
    throw ArgumentError("order " + std::to_string(ell) + " outside [0, N-1]");
  const auto& s = spacings.spacings;
  const double delta = two_pi / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = k + ell < n ? k + ell : k + ell - n;
    acc += s[k] * s[j];
  }
  return acc / (static_cast<double>(n) * delta);
}

}  // namespace lls
