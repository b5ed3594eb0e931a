#pragma once

// Deterministic spectra: Dirichlet rectangles with irrational squared aspect
// ratio, and zeros of the Riemann zeta function read from text files.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lls/error.hpp"
#include "lls/spectrum.hpp"

namespace lls {

/// True when x has no continued-fraction convergent p/q with q <= max_den
/// that matches it to `tol`.
inline bool irrational_in_practice(double x, long max_den = 1000, double tol = 1e-12) {
  double r = x;
  long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(r)), q1 = 1;
  for (int it = 0; it < 64; ++it) {
    if (std::fabs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol * std::max(1.0, std::fabs(x)))
      return false;
    const double frac = r - std::floor(r);
    if (frac < 1e-15) return false;
    r = 1.0 / frac;
    const auto a = static_cast<long>(std::floor(r));
    const long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) return true;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return true;
}

struct BilliardConfig {
  double area = 4.0 * std::numbers::pi;
  double aspect = std::numbers::sqrt2 + 1.0;  // h = a/b
  double energy_center = 1e8;
  double window_halfwidth = 600.0;

  double side_a() const { return std::sqrt(area * aspect); }
  double side_b() const { return std::sqrt(area / aspect); }
  double perimeter() const { return 2.0 * (side_a() + side_b()); }

  void validate() const {
    if (!(area > 0.0 && aspect > 0.0 && energy_center > 0.0 && window_halfwidth > 0.0))
      throw ArgumentError("billiard parameters must be positive");
    if (window_halfwidth >= energy_center) throw ArgumentError("billiard window reaches below zero energy");
  }

  /// Heuristic warnings (not errors): rational-looking squared aspect ratio.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (!irrational_in_practice(aspect * aspect))
      w.push_back("squared aspect ratio " + std::to_string(aspect * aspect) + " looks rational");
    return w;
  }
};

/// Every Dirichlet level pi^2 (m^2/a^2 + n^2/b^2), m, n >= 1, inside
/// [center - w, center + w], sorted. Degenerate levels make the LineSpectrum
/// constructor throw; fewer than `min_levels` levels is an error.
inline LineSpectrum billiard_levels(const BilliardConfig& cfg, std::size_t min_levels = 1000) {
  cfg.validate();
  const double a = cfg.side_a(), b = cfg.side_b();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double lo = cfg.energy_center - cfg.window_halfwidth, hi = cfg.energy_center + cfg.window_halfwidth;
  const double ka = pi2 / (a * a), kb = pi2 / (b * b);
  std::vector<double> levels;
  for (long m = 1;; ++m) {
    const double em = ka * static_cast<double>(m) * static_cast<double>(m);
    if (em + kb > hi) break;
    // n range from the window, widened by one and then filtered exactly.
    const double nlo = std::sqrt(std::max(0.0, (lo - em) / kb));
    const double nhi = std::sqrt((hi - em) / kb);
    for (long n = std::max(1L, static_cast<long>(nlo) - 1); n <= static_cast<long>(nhi) + 1; ++n) {
      const double e = em + kb * static_cast<double>(n) * static_cast<double>(n);
      if (e >= lo && e <= hi) levels.push_back(e);
    }
  }
  if (levels.size() < min_levels)
    throw InsufficientLevels("billiard window holds " + std::to_string(levels.size()) + " levels, need " +
                             std::to_string(min_levels));
  std::sort(levels.begin(), levels.end());
  return LineSpectrum(std::move(levels), Scale::raw);
}

/// Smooth level count with perimeter correction.
inline double weyl_count(const BilliardConfig& cfg, double e) {
  const double four_pi = 4.0 * std::numbers::pi;
  return cfg.area / four_pi * e - cfg.perimeter() / four_pi * std::sqrt(e) + 0.25;
}

inline LineSpectrum weyl_unfold(const LineSpectrum& raw, const BilliardConfig& cfg) {
  if (raw.scale() != Scale::raw) throw ArgumentError("weyl_unfold expects a raw spectrum");
  std::vector<double> x(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) x[k] = weyl_count(cfg, raw[k]);
  return LineSpectrum(std::move(x), Scale::unfolded);
}

/// Unfolded billiard levels measured from the unfolded reference point
/// weyl_count(energy_center); the reference point is then 0.
inline LineSpectrum billiard_unfolded_centered(const BilliardConfig& cfg, std::size_t min_levels = 1000) {
  const auto raw = billiard_levels(cfg, min_levels);
  const double c = weyl_count(cfg, cfg.energy_center);
  std::vector<double> x(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) x[k] = weyl_count(cfg, raw[k]) - c;
  return LineSpectrum(std::move(x), Scale::unfolded);
}

/// Ordinates gamma_n = base + offsets[n]. High-height datasets store small
/// offsets from a large base that double precision cannot hold exactly.
struct ZerosDataset {
  double base = 0.0;
  std::string base_text;  // base as written in the file, for round trips
  std::vector<double> offsets;
  std::size_t source_offset = 0;  // 1-based index of the first zero (gamma_1 = 14.13...), 0 if unknown

  std::size_t size() const noexcept { return offsets.size(); }
  double ordinate(std::size_t k) const { return base + offsets.at(k); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("cannot parse '" + std::string(s) + "' as a number", line);
  return v;
}

}  // namespace detail

/// Parses one decimal per line. A header line "# base <decimal>" (or a
/// non-empty `base_override`) declares that the values are offsets from that
/// base. Other lines starting with '#' and blank lines are ignored.
inline ZerosDataset parse_zeros(std::istream& in, std::optional<std::string> base_override = std::nullopt) {
  ZerosDataset ds;
  if (base_override) {
    ds.base_text = *base_override;
    ds.base = detail::parse_double(detail::trim(ds.base_text), 0);
  }
  std::string line;
  std::size_t lineno = 0;
  double prev = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto body = detail::trim(t.substr(1));
      if (body.starts_with("base") && !base_override) {
        ds.base_text = std::string(detail::trim(body.substr(4)));
        ds.base = detail::parse_double(ds.base_text, lineno);
      } else if (body.starts_with("first_index")) {
        ds.source_offset = static_cast<std::size_t>(detail::parse_double(detail::trim(body.substr(11)), lineno));
      }
      continue;
    }
    const double v = detail::parse_double(t, lineno);
    if (!ds.offsets.empty() && !(v > prev))
      throw ParseError("ordinates not strictly increasing (" + std::string(t) + ")", lineno);
    ds.offsets.push_back(v);
    prev = v;
  }
  if (ds.offsets.empty()) throw ParseError("no ordinates in zeros file", 0);
  return ds;
}

inline ZerosDataset parse_zeros_file(const std::string& path, std::optional<std::string> base_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open zeros file '" + path + "'");
  return parse_zeros(in, std::move(base_override));
}

/// Shortest decimal that parses back to the same double.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_zeros(std::ostream& out, const ZerosDataset& ds) {
  if (!ds.base_text.empty()) out << "# base " << ds.base_text << '\n';
  if (ds.source_offset) out << "# first_index " << ds.source_offset << '\n';
  for (double v : ds.offsets) out << format_shortest(v) << '\n';
}

/// Smooth zero count (gamma/2pi) ln(gamma/(2 pi e)) + 7/8.
inline double riemann_count(double gamma) {
  return gamma / two_pi * std::log(gamma / (two_pi * std::numbers::e)) + 0.875;
}

/// Unfolds ordinates with the smooth zero count. With a nonzero base b the
/// output is N(b + d) - N(b), written as
///   d N'(b) + (b / 2 pi) ((1 + x) log1p(x) - x),   x = d / b,
/// which stays exact at heights where b + d is beyond double resolution. The
/// dropped constant N(b) does not affect spacings.
inline LineSpectrum riemann_unfold(const ZerosDataset& ds) {
  const double threshold = two_pi * std::numbers::e;
  std::vector<double> x(ds.size());
  if (ds.base == 0.0) {
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const double g = ds.offsets[k];
      if (!(g > threshold))
        throw ArgumentError("ordinate " + std::to_string(g) + " below the unfolding threshold 2 pi e");
      x[k] = riemann_count(g);
    }
  } else {
    const double b = ds.base;
    if (!(b + ds.offsets.front() > threshold)) throw ArgumentError("ordinates below the unfolding threshold 2 pi e");
    const double slope = std::log(b / two_pi) / two_pi;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const double d = ds.offsets[k], r = d / b;
      x[k] = d * slope + b / two_pi * ((1.0 + r) * std::log1p(r) - r);
    }
  }
  return LineSpectrum(std::move(x), Scale::unfolded);
}

/// Drops ordinates at or below 2 pi e (the first zero, 14.13..., is one).
inline ZerosDataset above_unfolding_threshold(ZerosDataset ds) {
  const double threshold = two_pi * std::numbers::e;
  std::size_t k = 0;
  while (k < ds.size() && !(ds.ordinate(k) > threshold)) ++k;
  ds.offsets.erase(ds.offsets.begin(), ds.offsets.begin() + static_cast<long>(k));
  if (ds.source_offset) ds.source_offset += k;
  return ds;
}

}  // namespace lls
