#pragma once

// CMV matrices built from Verblunsky coefficients, and an O(N^2) eigen-angle
// solver based on the relative Pruefer phase of the Szego recursion.
//
// For coefficients alpha_0..alpha_{N-1} with |alpha_{N-1}| = 1 the CMV matrix
// C = L M has characteristic polynomial Phi_N, and on the unit circle
//
//   B_0(z) = z,   B_{k+1}(z) = z (B_k - conj(alpha_k)) / (1 - alpha_k B_k).
//
// Eigenvalues are the points z = e^{i theta} with B_{N-1}(z) = conj(alpha_{N-1}).
// Writing B_k = e^{i psi_k}, the lifted phase
//
//   psi_{k+1} = theta + psi_k - 2 arg(1 - alpha_k B_k)
//
// is continuous, strictly increasing in theta, and gains 2 pi N per turn, so
// the N eigen-angles are the unique solutions of psi_{N-1}(theta) = c + 2 pi j.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lls/error.hpp"
#include "lls/random.hpp"
#include "lls/spectrum.hpp"

namespace lls::cmv {

using cplx = std::complex<double>;

/// Killip-Nenciu coefficients for the circular beta ensemble of size n:
/// alpha_k rotation invariant with |alpha_k|^2 ~ Beta(1, beta (n-k-1)/2) for
/// k < n-1, and alpha_{n-1} uniform on the unit circle.
inline std::vector<cplx> sample_verblunsky(double beta, std::size_t n, Engine& eng) {
  std::vector<cplx> alpha(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double b = beta * static_cast<double>(n - k - 1) / 2.0;
    // Inverse CDF of Beta(1, b): 1 - (1 - u)^{1/b}; uniform_open keeps u in (0,1).
    const double r2 = -std::expm1(std::log(uniform_open(eng)) / b);
    const double phase = two_pi * uniform_open(eng);
    alpha[k] = std::polar(std::sqrt(r2), phase);
  }
  if (n > 0) alpha[n - 1] = std::polar(1.0, two_pi * uniform_open(eng));
  return alpha;
}

/// Dense CMV matrix L M with Theta_k = [[conj a_k, rho_k], [rho_k, -a_k]],
/// L = Theta_0 + Theta_2 + ..., M = 1 + Theta_1 + Theta_3 + ... and the last
/// (unimodular) coefficient entering as the 1x1 block conj(a_{n-1}).
inline Eigen::MatrixXcd cmv_matrix(std::span<const cplx> alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  auto block = [&](Eigen::MatrixXcd& m, Eigen::Index k) {
    const cplx a = alpha[static_cast<std::size_t>(k)];
    if (k == n - 1) {
      m(k, k) = std::conj(a);
      return;
    }
    const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
    m(k, k) = std::conj(a);
    m(k, k + 1) = rho;
    m(k + 1, k) = rho;
    m(k + 1, k + 1) = -a;
  };
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) block(l, k);
  if (n > 0) m(0, 0) = 1.0;
  for (Eigen::Index k = 1; k < n; k += 2) block(m, k);
  return l * m;
}

namespace detail {

// atan on the whole real line, branch free so that lane loops vectorize.
// Reduction to |t| <= tan(pi/12) followed by a 13-term odd series; the
// truncation error is below 1e-16.
inline double atan_poly(double x) {
  constexpr double sqrt3 = std::numbers::sqrt3;
  constexpr double tan_pi_12 = 2.0 - sqrt3;
  const double ax = std::fabs(x);
  const double rx = 1.0 / ax;
  const double t0 = ax < rx ? ax : rx;
  const double inv = ax > 1.0 ? 1.0 : 0.0;
  const double shift = t0 > tan_pi_12 ? 1.0 : 0.0;
  const double t = t0 + shift * ((t0 * sqrt3 - 1.0) / (t0 + sqrt3) - t0);
  const double t2 = t * t;
  double p = 1.0 / 25.0;
  p = p * t2 - 1.0 / 23.0;
  p = p * t2 + 1.0 / 21.0;
  p = p * t2 - 1.0 / 19.0;
  p = p * t2 + 1.0 / 17.0;
  p = p * t2 - 1.0 / 15.0;
  p = p * t2 + 1.0 / 13.0;
  p = p * t2 - 1.0 / 11.0;
  p = p * t2 + 1.0 / 9.0;
  p = p * t2 - 1.0 / 7.0;
  p = p * t2 + 1.0 / 5.0;
  p = p * t2 - 1.0 / 3.0;
  p = p * t2 + 1.0;
  const double r0 = t * p + shift * (std::numbers::pi / 6.0);
  const double r = r0 + inv * (std::numbers::pi / 2.0 - 2.0 * r0);
  return std::copysign(r, x);
}

}  // namespace detail

/// Pruefer-phase eigen-angle solver for one set of Verblunsky coefficients.
class PhaseSolver {
 public:
  explicit PhaseSolver(std::span<const cplx> alpha) : n_(alpha.size()) {
    if (n_ == 0) throw ArgumentError("empty Verblunsky sequence");
    const cplx last = alpha[n_ - 1];
    if (std::abs(std::abs(last) - 1.0) > 1e-12)
      throw ArgumentError("last Verblunsky coefficient must be unimodular");
    last_ = last / std::abs(last);
    re_.resize(n_ - 1);
    im_.resize(n_ - 1);
    shrink_.resize(n_ - 1);
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      re_[k] = alpha[k].real();
      im_[k] = alpha[k].imag();
      shrink_[k] = 1.0 - std::norm(alpha[k]);
      if (!(shrink_[k] > 0.0)) throw ArgumentError("interior Verblunsky coefficient on the unit circle");
    }
  }

  /// Lifted phase psi_{N-1}(theta).
  double phase(double theta) const {
    double lane_theta[1] = {theta};
    double out[1];
    phases(lane_theta, out);
    return out[0];
  }

  /// Lifted phase at many angles at once, in blocks of `lanes` angles.
  void phases(std::span<const double> theta, std::span<double> psi) const {
    for (std::size_t j0 = 0; j0 < theta.size(); j0 += lanes) {
      const std::size_t m = std::min(lanes, theta.size() - j0);
      Block t{}, out{};
      std::copy_n(theta.begin() + static_cast<std::ptrdiff_t>(j0), m, t.begin());
      phase_block(t, out);
      std::copy_n(out.begin(), m, psi.begin() + static_cast<std::ptrdiff_t>(j0));
    }
  }

  /// Newton residual for many angles at once: h = tan((psi - target) / 2)
  /// and dh/dtheta. Only meaningful where |psi - target| < pi; there h is
  /// increasing and close to linear around its zero.
  void residuals(std::span<const double> theta, std::span<double> h, std::span<double> dh) const {
    for (std::size_t j0 = 0; j0 < theta.size(); j0 += lanes) {
      const std::size_t m = std::min(lanes, theta.size() - j0);
      Block t{}, hb{}, db{};
      std::copy_n(theta.begin() + static_cast<std::ptrdiff_t>(j0), m, t.begin());
      residual_block(t, hb, db);
      std::copy_n(hb.begin(), m, h.begin() + static_cast<std::ptrdiff_t>(j0));
      std::copy_n(db.begin(), m, dh.begin() + static_cast<std::ptrdiff_t>(j0));
    }
  }

  /// Sorted eigen-angles in [0, 2pi). Throws SolverError if isolation fails
  /// (a probability-zero event for continuous samplers).
  std::vector<double> eigenangles(std::size_t grid_factor = 4) const {
    const std::size_t n = n_;
    const std::size_t g = std::max<std::size_t>(grid_factor * n, 8);
    std::vector<double> theta(g), psi(g);
    for (std::size_t j = 0; j < g; ++j) theta[j] = two_pi * static_cast<double>(j) / static_cast<double>(g);
    phases(theta, psi);
    const double psi_end = psi[0] + two_pi * static_cast<double>(n);

    const double c = -std::arg(last_);
    // Targets c + 2 pi j lying in [psi(0), psi(0) + 2 pi N).
    const double first_j = std::ceil((psi[0] - c) / two_pi);
    auto target = [&](std::size_t i) { return c + two_pi * (first_j + static_cast<double>(i)); };

    std::vector<Cell> pending, good;
    std::size_t next = 0;
    for (std::size_t j = 0; j < g && next < n; ++j) {
      const double b = j + 1 < g ? theta[j + 1] : two_pi;
      const double pb = j + 1 < g ? psi[j + 1] : psi_end;
      std::size_t count = 0;
      while (next + count < n && target(next + count) < pb) ++count;
      if (count > 0) pending.push_back({theta[j], b, psi[j], pb, next, count});
      next += count;
    }

    // Split cells until every one holds a single target with a phase range
    // below pi, so that the Newton residual is monotone on it.
    constexpr double margin = 1e-6;
    constexpr std::size_t split = 4;
    for (int round = 0; !pending.empty(); ++round) {
      std::vector<Cell> bad;
      for (const auto& cell : pending) {
        if (cell.count == 1 && cell.psi_b - cell.psi_a < std::numbers::pi - margin) good.push_back(cell);
        else bad.push_back(cell);
      }
      pending.clear();
      if (bad.empty()) break;
      if (round > 40) throw SolverError("eigen-angle cluster not separable");
      std::vector<double> pts, vals;
      for (const auto& cell : bad)
        for (std::size_t s = 1; s < split; ++s)
          pts.push_back(cell.a + (cell.b - cell.a) * static_cast<double>(s) / static_cast<double>(split));
      vals.resize(pts.size());
      phases(pts, vals);
      std::size_t off = 0;
      for (const auto& cell : bad) {
        double a = cell.a, pa = cell.psi_a;
        std::size_t first = cell.first, left = cell.count;
        for (std::size_t s = 1; s <= split; ++s) {
          const double b = s < split ? pts[off + s - 1] : cell.b;
          const double pb = s < split ? vals[off + s - 1] : cell.psi_b;
          std::size_t count = 0;
          while (count < left && target(first + count) < pb) ++count;
          if (count > 0) pending.push_back({a, b, pa, pb, first, count});
          first += count;
          left -= count;
          a = b;
          pa = pb;
        }
        off += split - 1;
      }
    }
    if (good.size() != n)
      throw SolverError("Pruefer isolation found " + std::to_string(good.size()) + " of " + std::to_string(n) +
                        " eigen-angles");

    // Safeguarded Newton on h, all roots in lockstep.
    std::vector<double> x(n), lo(n), hi(n), h(n), dh(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& cell = good[i];
      lo[i] = cell.a;
      hi[i] = cell.b;
      x[i] = cell.a + (cell.b - cell.a) * (target(cell.first) - cell.psi_a) / (cell.psi_b - cell.psi_a);
    }
    // Only unconverged lanes are re-evaluated.
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;
    std::vector<double> xa(n);
    for (int it = 0; it < 100 && !active.empty(); ++it) {
      const std::size_t m = active.size();
      for (std::size_t k = 0; k < m; ++k) xa[k] = x[active[k]];
      residuals(std::span(xa).first(m), std::span(h).first(m), std::span(dh).first(m));
      std::size_t keep = 0;
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = active[k];
        if (h[k] < 0.0) lo[i] = x[i];
        else if (h[k] > 0.0) hi[i] = x[i];
        else continue;
        const double step = h[k] / dh[k];
        // Converged when the remaining Newton correction is at rounding level,
        // or after a small step (the error left is then of order step^2).
        if (std::fabs(step) <= 1e-15 * (1.0 + std::fabs(x[i]))) continue;
        double xn = x[i] - step;
        const bool newton = xn >= lo[i] && xn <= hi[i];
        if (!newton) xn = 0.5 * (lo[i] + hi[i]);
        x[i] = xn;
        if (!((newton && std::fabs(step) <= 1e-12) || hi[i] - lo[i] <= 1e-15)) active[keep++] = i;
      }
      active.resize(keep);
    }
    for (auto& r : x) r = CircularSpectrum::wrap_angle(r);
    std::sort(x.begin(), x.end());
    return x;
  }

 private:
  // Fixed-width blocks keep the recursions vectorizable whatever the caller.
  static constexpr std::size_t lanes = 16;
  using Block = std::array<double, lanes>;

  void phase_block(const Block& theta, Block& psi) const {
    Block br, bi, zr, zi;
    for (std::size_t j = 0; j < lanes; ++j) {
      zr[j] = std::cos(theta[j]);
      zi[j] = std::sin(theta[j]);
      br[j] = zr[j];
      bi[j] = zi[j];
      psi[j] = theta[j];
    }
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      const double ar = re_[k], ai = im_[k];
      for (std::size_t j = 0; j < lanes; ++j) {
        // d = 1 - alpha B, Re d > 0.
        const double dr = 1.0 - (ar * br[j] - ai * bi[j]);
        const double di = -(ar * bi[j] + ai * br[j]);
        psi[j] += theta[j] - 2.0 * detail::atan_poly(di / dr);
        // B <- z (B - conj alpha) / d
        const double nr = br[j] - ar, ni = bi[j] + ai;
        const double inv = 1.0 / (dr * dr + di * di);
        const double qr = (nr * dr + ni * di) * inv;
        const double qi = (ni * dr - nr * di) * inv;
        br[j] = zr[j] * qr - zi[j] * qi;
        bi[j] = zr[j] * qi + zi[j] * qr;
      }
    }
  }

  void residual_block(const Block& theta, Block& h, Block& dh) const {
    Block br, bi, zr, zi, dp;
    for (std::size_t j = 0; j < lanes; ++j) {
      zr[j] = std::cos(theta[j]);
      zi[j] = std::sin(theta[j]);
      br[j] = zr[j];
      bi[j] = zi[j];
      dp[j] = 1.0;
    }
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      const double ar = re_[k], ai = im_[k], sk = shrink_[k];
      for (std::size_t j = 0; j < lanes; ++j) {
        const double dr = 1.0 - (ar * br[j] - ai * bi[j]);
        const double di = -(ar * bi[j] + ai * br[j]);
        const double inv = 1.0 / (dr * dr + di * di);
        dp[j] = 1.0 + dp[j] * sk * inv;
        const double nr = br[j] - ar, ni = bi[j] + ai;
        const double qr = (nr * dr + ni * di) * inv;
        const double qi = (ni * dr - nr * di) * inv;
        br[j] = zr[j] * qr - zi[j] * qi;
        bi[j] = zr[j] * qi + zi[j] * qr;
      }
    }
    // Eigen-condition B = conj(last)  <=>  w = B * last = 1.
    for (std::size_t j = 0; j < lanes; ++j) {
      const double wr = br[j] * last_.real() - bi[j] * last_.imag();
      const double wi = br[j] * last_.imag() + bi[j] * last_.real();
      h[j] = wi / (1.0 + wr);
      dh[j] = 0.5 * (1.0 + h[j] * h[j]) * dp[j];
    }
  }

  struct Cell {
    double a, b, psi_a, psi_b;
    std::size_t first, count;
  };

  std::size_t n_;
  cplx last_;
  std::vector<double> re_, im_, shrink_;
};

/// Eigen-angles of the CMV matrix with the given coefficients.
inline std::vector<double> eigenangles(std::span<const cplx> alpha) { return PhaseSolver(alpha).eigenangles(); }

}  // namespace lls::cmv
