#pragma once

// Histograms with uniform or geometric bins, KS distances against a CDF,
// and log-log slope fits near the origin.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lls/error.hpp"

namespace lls {

class Histogram {
 public:
  enum class Binning { uniform, geometric };

  Histogram() = default;

  /// `bins` uniform bins over [lo, hi].
  Histogram(double lo, double hi, std::size_t bins) : Histogram(Binning::uniform, lo, hi, bins) {}

  /// Geometric bins over [lo, hi], lo > 0.
  static Histogram geometric(double lo, double hi, std::size_t bins) {
    if (!(lo > 0.0)) throw ArgumentError("geometric histogram needs lo > 0");
    return Histogram(Binning::geometric, lo, hi, bins);
  }

  void add(double x) noexcept {
    ++total_;
    if (!(x >= lo_ && x < hi_)) return;
    const double u = binning_ == Binning::uniform ? (x - lo_) * scale_ : std::log(x / lo_) * scale_;
    const auto k = std::min(counts_.size() - 1, static_cast<std::size_t>(u));
    ++counts_[k];
  }

  void merge(const Histogram& o) {
    if (o.counts_.size() != counts_.size() || o.lo_ != lo_ || o.hi_ != hi_ || o.binning_ != binning_)
      throw ArgumentError("merging incompatible histograms");
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += o.counts_[k];
    total_ += o.total_;
  }

  std::size_t bins() const noexcept { return counts_.size(); }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double left(std::size_t k) const noexcept { return edge(k); }
  double right(std::size_t k) const noexcept { return edge(k + 1); }
  double width(std::size_t k) const noexcept { return edge(k + 1) - edge(k); }
  double center(std::size_t k) const noexcept {
    return binning_ == Binning::uniform ? 0.5 * (edge(k) + edge(k + 1)) : std::sqrt(edge(k) * edge(k + 1));
  }
  std::uint64_t count(std::size_t k) const { return counts_.at(k); }
  /// Every recorded value, including those outside [lo, hi).
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t in_range() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  /// Density estimate normalized by the total count: estimates the pdf
  /// itself, so mass outside the range is simply missing.
  std::vector<double> density() const { return normalized_by(static_cast<double>(total_)); }

  /// Density normalized by the in-range count; integrates to 1 over [lo, hi].
  std::vector<double> normalized_density() const { return normalized_by(static_cast<double>(in_range())); }

 private:
  Histogram(Binning b, double lo, double hi, std::size_t bins) : binning_(b), lo_(lo), hi_(hi), counts_(bins, 0) {
    if (bins == 0 || !(hi > lo)) throw ArgumentError("histogram needs bins > 0 and hi > lo");
    scale_ = b == Binning::uniform ? static_cast<double>(bins) / (hi - lo)
                                   : static_cast<double>(bins) / std::log(hi / lo);
  }

  double edge(std::size_t k) const noexcept {
    const double f = static_cast<double>(k) / static_cast<double>(counts_.size());
    if (k == counts_.size()) return hi_;
    return binning_ == Binning::uniform ? lo_ + (hi_ - lo_) * f : lo_ * std::pow(hi_ / lo_, f);
  }

  std::vector<double> normalized_by(double n) const {
    std::vector<double> d(counts_.size(), 0.0);
    if (n <= 0.0) return d;
    for (std::size_t k = 0; k < counts_.size(); ++k) d[k] = static_cast<double>(counts_[k]) / (n * width(k));
    return d;
  }

  Binning binning_ = Binning::uniform;
  double lo_ = 0.0, hi_ = 1.0, scale_ = 1.0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Upper bound on the Kolmogorov-Smirnov distance between the binned sample
/// and a continuous CDF: the largest deviation at bin edges plus the largest
/// probability mass (empirical or model) inside one bin.
inline double ks_upper_bound(const Histogram& h, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(h.total());
  if (n <= 0.0) throw ArgumentError("empty histogram");
  std::uint64_t below = 0;
  // lo has to be the lower edge of the support; values below it are not tracked.
  double ks = std::fabs(0.0 - cdf(h.lo()));
  double worst_bin = 0.0;
  for (std::size_t k = 0; k < h.bins(); ++k) {
    below += h.count(k);
    const double emp = static_cast<double>(below) / n;
    ks = std::max(ks, std::fabs(emp - cdf(h.right(k))));
    const double model_mass = cdf(h.right(k)) - cdf(h.left(k));
    worst_bin = std::max({worst_bin, static_cast<double>(h.count(k)) / n, model_mass});
  }
  return ks + worst_bin;
}

/// Sup-norm distance between a density estimate and a model, with the model
/// averaged over each bin (Simpson rule) so binning itself adds no bias.
inline double sup_norm(const Histogram& h, std::span<const double> density, const std::function<double(double)>& pdf) {
  double worst = 0.0;
  for (std::size_t k = 0; k < h.bins(); ++k) {
    const double a = h.left(k), b = h.right(k);
    const double avg = (pdf(a) + 4.0 * pdf(0.5 * (a + b)) + pdf(b)) / 6.0;
    worst = std::max(worst, std::fabs(density[k] - avg));
  }
  return worst;
}

struct SlopeFit {
  double slope = 0.0;
  double lo = 0.0, hi = 0.0;  // fitted range
  std::size_t bins = 0;
};

/// Log-log slope of a geometric histogram near the origin: weighted least
/// squares of log density on log center over the lowest decade in which every
/// bin holds at least `min_count` entries.
inline SlopeFit origin_slope(const Histogram& h, std::uint64_t min_count) {
  const auto d = h.density();
  for (std::size_t k0 = 0; k0 < h.bins(); ++k0) {
    const double lo = h.left(k0), hi = 10.0 * lo;
    if (hi > h.hi() * (1.0 + 1e-12)) break;
    std::size_t k1 = k0;
    bool ok = true;
    while (k1 < h.bins() && h.right(k1) <= hi * (1.0 + 1e-9)) {
      if (h.count(k1) < min_count) {
        ok = false;
        break;
      }
      ++k1;
    }
    if (!ok || k1 - k0 < 3) continue;
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = k0; k < k1; ++k) {
      const double w = static_cast<double>(h.count(k));
      const double x = std::log(h.center(k)), y = std::log(d[k]);
      sw += w;
      sx += w * x;
      sy += w * y;
      sxx += w * x * x;
      sxy += w * x * y;
    }
    const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
    return {slope, lo, h.right(k1 - 1), k1 - k0};
  }
  throw InsufficientLevels("no decade with enough counts for a slope fit");
}

}  // namespace lls
