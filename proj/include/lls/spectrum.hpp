#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lls/error.hpp"

namespace lls {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Ordered eigen-angles on [0, 2pi). The mean spacing 2pi/N is implied.
class CircularSpectrum {
 public:
  CircularSpectrum() = default;

  /// Takes already ordered angles; throws ArgumentError otherwise.
  explicit CircularSpectrum(std::vector<double> angles) : angles_(std::move(angles)) {
    if (angles_.empty()) throw ArgumentError("circular spectrum needs at least one level");
    for (std::size_t i = 0; i < angles_.size(); ++i) {
      const double a = angles_[i];
      if (!(a >= 0.0 && a < two_pi))
        throw ArgumentError("eigen-angle " + std::to_string(a) + " outside [0, 2pi)");
      if (i > 0 && a < angles_[i - 1])
        throw ArgumentError("eigen-angles are not ordered at index " + std::to_string(i));
    }
  }

  /// Wraps arbitrary angles into [0, 2pi) and sorts them.
  static CircularSpectrum from_unordered(std::vector<double> angles) {
    for (auto& a : angles) a = wrap_angle(a);
    std::sort(angles.begin(), angles.end());
    return CircularSpectrum(std::move(angles));
  }

  static double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a = 0.0;  // -tiny + 2pi rounds up to 2pi
    return a;
  }

  std::span<const double> angles() const noexcept { return angles_; }
  std::size_t n_levels() const noexcept { return angles_.size(); }
  double mean_spacing() const noexcept { return two_pi / static_cast<double>(angles_.size()); }
  double operator[](std::size_t i) const noexcept { return angles_[i]; }

 private:
  std::vector<double> angles_;
};

enum class Scale { raw, unfolded };

inline const char* to_string(Scale s) { return s == Scale::raw ? "raw" : "unfolded"; }

/// Strictly increasing real levels. Zero spacings are rejected here; any
/// degeneracy resolution has to happen before construction.
class LineSpectrum {
 public:
  LineSpectrum() = default;

  LineSpectrum(std::vector<double> levels, Scale scale) : levels_(std::move(levels)), scale_(scale) {
    for (std::size_t i = 1; i < levels_.size(); ++i) {
      if (!(levels_[i] > levels_[i - 1]))
        throw DegenerateSpectrum("line spectrum not strictly increasing at index " + std::to_string(i) +
                            " (" + std::to_string(levels_[i - 1]) + " -> " +
                            std::to_string(levels_[i]) + ")");
    }
  }

  std::span<const double> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  Scale scale() const noexcept { return scale_; }
  double operator[](std::size_t i) const noexcept { return levels_[i]; }

  /// Every level multiplied by c > 0 (scale tag preserved).
  LineSpectrum scaled(double c) const {
    std::vector<double> out(levels_);
    for (auto& x : out) x *= c;
    return LineSpectrum(std::move(out), scale_);
  }

 private:
  std::vector<double> levels_;
  Scale scale_ = Scale::raw;
};

/// Local spacings s_0..s_L seen from a reference point phi; s_0 straddles phi.
struct LocalSpacingRecord {
  double phi = 0.0;
  std::size_t anchor = 0;
  std::vector<double> spacings;

  std::size_t max_order() const noexcept { return spacings.empty() ? 0 : spacings.size() - 1; }
};

/// Differences between consecutive levels; cyclic ones include the wrap arc.
struct ConsecutiveSpacings {
  std::vector<double> spacings;
  bool cyclic = true;

  std::size_t size() const noexcept { return spacings.size(); }
};

}  // namespace lls
