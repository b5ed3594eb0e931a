#pragma once

// The Painleve V transcendent sigma(t) behind the sine-process gap
// probabilities,
//
//   (t s'')^2 + (t s' - s)(t s' - s + 4 s'^2) = 0,   s = -t/2pi - (t/2pi)^2 + O(t^3),
//
// tabulated together with the integrals
//
//   I(t) = int_0^t s(x)/x dx,   J(t) = int_0^t sqrt(-(s(x)/x)') dx.
//
// Near the origin the Taylor series is used (coefficients bootstrapped order
// by order from the equation); beyond t0 the second-order form
// s'' = -sqrt(-(t s' - s)(t s' - s + 4 s'^2)) / t is integrated with a
// Runge-Kutta-Fehlberg 7(8) scheme in extended precision: the wanted solution
// is unstable, with perturbations growing roughly like exp(t/2), so double
// precision loses it past t ~ 36.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "lls/error.hpp"
#include "lls/quadrature.hpp"

namespace lls {

/// Taylor coefficients a_1..a_degree of sigma (index 0 unused, zero).
template <class Real = double>
std::vector<Real> sigma0_taylor(std::size_t degree) {
  if (degree < 2) throw ArgumentError("Taylor degree must be at least 2");
  std::vector<Real> a(degree + 2, Real(0));
  a[1] = Real(-1) / (Real(2) * std::numbers::pi_v<Real>);
  a[2] = -a[1] * a[1];
  for (std::size_t m = 3; m <= degree; ++m) {
    // Coefficient of t^m in the equation with a_m = 0; a_m enters it linearly
    // with weight -4 (m-1)^2 a_1^2.
    auto p = [&](std::size_t k) { return static_cast<Real>((k + 1) * k) * a[k + 1]; };  // t s''
    auto u = [&](std::size_t k) { return static_cast<Real>(k) * a[k] - a[k]; };          // t s' - s
    auto d = [&](std::size_t k) { return static_cast<Real>(k + 1) * a[k + 1]; };         // s'
    Real c = 0;
    for (std::size_t i = 0; i <= m; ++i) c += p(i) * p(m - i) + u(i) * u(m - i);
    for (std::size_t i = 0; i <= m; ++i) {
      Real dd = 0;
      for (std::size_t j = 0; j <= m - i; ++j) dd += d(j) * d(m - i - j);
      c += 4 * u(i) * dd;
    }
    const auto md = static_cast<Real>(m - 1);
    a[m] = c / (4 * md * md * a[1] * a[1]);
  }
  a.resize(degree + 1);
  return a;
}

/// sigma, sigma' and the integrals I, J at a point.
struct Sigma0Point {
  double t, sigma, dsigma, i, j;
};

class Sigma0Table {
 public:
  using Real = long double;
  static constexpr double t0 = 1e-2;
  static constexpr std::size_t taylor_degree = 24;

  /// Values on the grid t_k = k * step, k = 0..ceil(t_max/step). `tolerance`
  /// bounds how far the radicand may go negative before the branch is
  /// declared lost; the integration itself runs at extended precision.
  Sigma0Table(double t_max, double step, double tolerance = 1e-12) : step_(step), tol_(tolerance) {
    if (!(t_max > 0.0) || t_max > 64.0) throw ArgumentError("sigma table needs 0 < t_max <= 64");
    if (!(step > 0.0) || step > 0.1) throw ArgumentError("sigma table step must be in (0, 0.1]");
    if (tolerance < 1e-14) throw ArgumentError("tolerance below 1e-14 is not attainable");
    a_ = sigma0_taylor<Real>(taylor_degree);
    jrule_ = gauss_legendre(24, 0.0, 1.0);
    const auto n = static_cast<std::size_t>(std::ceil(t_max / step - 1e-9)) + 1;
    grid_.resize(n);
    std::vector<Real> times;
    std::vector<std::size_t> index;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * step;
      if (t <= t0) grid_[k] = narrow(t, series(t));
      else {
        times.push_back(static_cast<Real>(k) * static_cast<Real>(step));
        index.push_back(k);
      }
    }
    if (times.empty()) return;
    namespace ode = boost::numeric::odeint;
    State x = series(t0);
    times.insert(times.begin(), Real(t0));
    std::size_t seen = 0;
    auto observe = [&](const State& s, Real t) {
      if (seen > 0) grid_[index[seen - 1]] = narrow(static_cast<double>(t), s);
      ++seen;
    };
    auto rhs = [this](const State& s, State& d, Real t) {
      if (!derivative(s, d, t)) throw SolverError("Painleve branch lost at t = " + std::to_string(static_cast<double>(t)));
    };
    auto stepper = ode::make_controlled(Real(1e-18), Real(1e-18), ode::runge_kutta_fehlberg78<State, Real>());
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), Real(1e-3), observe);
  }

  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double t_max() const noexcept { return step_ * static_cast<double>(grid_.size() - 1); }
  const Sigma0Point& operator[](std::size_t k) const { return grid_.at(k); }
  const std::vector<Real>& taylor() const noexcept { return a_; }

  /// Values at any t in [-0.1, t_max]: the series up to t0 (it converges
  /// on both sides of the origin), cubic Hermite interpolation above.
  Sigma0Point at(double t) const {
    if (t <= t0 && t >= -0.1) return narrow(t, series(t));
    if (t < 0.0 || t > t_max() * (1.0 + 1e-12)) throw ArgumentError("t = " + std::to_string(t) + " outside the table");
    auto k = static_cast<std::size_t>(t / step_);
    if (k + 1 >= grid_.size()) k = grid_.size() - 2;
    const auto& l = grid_[k];
    const auto& r = grid_[k + 1];
    if (t == l.t) return l;
    const double h = r.t - l.t, u = (t - l.t) / h;
    auto herm = [&](double f0, double d0, double f1, double d1) {
      const double u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * h * d1;
    };
    State dl{}, dr{};
    derivative({l.sigma, l.dsigma, l.i, l.j}, dl, l.t);
    derivative({r.sigma, r.dsigma, r.i, r.j}, dr, r.t);
    return {t,
            herm(l.sigma, double(dl[0]), r.sigma, double(dr[0])),
            herm(l.dsigma, double(dl[1]), r.dsigma, double(dr[1])),
            herm(l.i, double(dl[2]), r.i, double(dr[2])),
            herm(l.j, double(dl[3]), r.j, double(dr[3]))};
  }

  /// sigma'' at a point, from the equation.
  double second_derivative(const Sigma0Point& p) const {
    State d{};
    derivative({p.sigma, p.dsigma, p.i, p.j}, d, p.t);
    return static_cast<double>(d[1]);
  }

 private:
  using State = std::array<Real, 4>;

  static Sigma0Point narrow(double t, const State& s) {
    return {t, static_cast<double>(s[0]), static_cast<double>(s[1]), static_cast<double>(s[2]),
            static_cast<double>(s[3])};
  }

  // Right-hand side of the augmented system (sigma, sigma', I, J); false when
  // the radicand is negative beyond tolerance.
  bool derivative(const State& s, State& d, Real t) const {
    const Real u = t * s[1] - s[0];
    const Real rad = -u * (u + 4 * s[1] * s[1]);
    const Real scale = std::fabs(u) * (std::fabs(u) + 4 * s[1] * s[1]);
    d[0] = s[1];
    d[1] = -std::sqrt(std::max(rad, Real(0))) / t;
    d[2] = s[0] / t;
    d[3] = std::sqrt(std::max(-u, Real(0))) / t;
    return !(rad < -tol_ * scale || u > tol_ * std::fabs(s[0]));
  }

  // -(s/t)' = -(t s' - s)/t^2 as a series in t.
  Real g2(Real t) const {
    Real v = 0;
    for (std::size_t m = a_.size() - 1; m >= 2; --m) v = v * t + static_cast<Real>(m - 1) * a_[m];
    return -v;
  }

  State series(Real t) const {
    Real s = 0, ds = 0, in = 0;
    for (std::size_t m = a_.size() - 1; m >= 1; --m) {
      s = s * t + a_[m];
      ds = ds * t + static_cast<Real>(m) * a_[m];
      in = in * t + a_[m] / static_cast<Real>(m);
    }
    // J(t) = int_0^t sqrt(g2(x)) dx; the integrand is analytic at 0.
    Real j = 0;
    for (std::size_t q = 0; q < jrule_.nodes.size(); ++q)
      j += static_cast<Real>(jrule_.weights[q]) * std::sqrt(g2(t * static_cast<Real>(jrule_.nodes[q])));
    return {s * t, ds, in * t, j * t};
  }

  double step_, tol_;
  std::vector<Real> a_;
  QuadratureRule jrule_;
  std::vector<Sigma0Point> grid_;
};

}  // namespace lls
