#pragma once

// Streaming moments with associative merge (Welford updates, Chan merges).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lls/error.hpp"

namespace lls {

inline constexpr double z99 = 2.576;

/// A value with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;

  double ci99() const noexcept { return z99 * se; }
};

/// True when two estimates agree within their joint 99% interval.
inline bool agree99(const Estimate& a, const Estimate& b) {
  return std::fabs(a.value - b.value) <= z99 * std::hypot(a.se, b.se);
}

class Moments {
 public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const Moments& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double d = o.mean_ - mean_;
    mean_ += d * nb / n;
    m2_ += o.m2_ + d * d * na * nb / n;
    n_ += o.n_;
  }

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance (0 below two samples).
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const noexcept { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }
  double ci99() const noexcept { return z99 * std_error(); }
  Estimate estimate() const noexcept { return {mean(), std_error()}; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Per-order accumulators for s_0..s_L, with co-moments against s_0 so that
/// ratio errors can be propagated. Also counts records that were rejected.
class SpacingStats {
 public:
  SpacingStats() = default;
  explicit SpacingStats(std::size_t max_order)
      : mean_(max_order + 1, 0.0), m2_(max_order + 1, 0.0), c0_(max_order + 1, 0.0) {}

  void add(std::span<const double> s) {
    if (s.size() < mean_.size()) throw ArgumentError("record shorter than the accumulator order");
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    const double d0 = s[0] - mean_[0];
    const double mean0 = mean_[0] + d0 * inv;
    for (std::size_t l = 0; l < mean_.size(); ++l) {
      const double d = s[l] - mean_[l];
      mean_[l] += d * inv;
      m2_[l] += d * (s[l] - mean_[l]);
      c0_[l] += d * (s[0] - mean0);
    }
  }

  void reject() noexcept { ++rejected_; }
  void discard() noexcept { ++discarded_; }

  void merge(const SpacingStats& o) {
    rejected_ += o.rejected_;
    discarded_ += o.discarded_;
    if (o.n_ == 0) return;
    if (n_ == 0) {
      const auto r = rejected_, d = discarded_;
      *this = o;
      rejected_ = r;
      discarded_ = d;
      return;
    }
    if (o.mean_.size() != mean_.size()) throw ArgumentError("merging stats of different order");
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double d0 = o.mean_[0] - mean_[0];
    for (std::size_t l = 0; l < mean_.size(); ++l) {
      const double d = o.mean_[l] - mean_[l];
      mean_[l] += d * nb / n;
      m2_[l] += o.m2_[l] + d * d * na * nb / n;
      c0_[l] += o.c0_[l] + d * d0 * na * nb / n;
    }
    n_ += o.n_;
  }

  std::size_t max_order() const noexcept { return mean_.empty() ? 0 : mean_.size() - 1; }
  std::uint64_t count() const noexcept { return n_; }
  std::uint64_t rejected() const noexcept { return rejected_; }
  std::uint64_t discarded() const noexcept { return discarded_; }

  double mean(std::size_t l) const { return mean_.at(l); }
  double variance(std::size_t l) const { return n_ > 1 ? m2_.at(l) / static_cast<double>(n_ - 1) : 0.0; }
  /// Sample covariance of s_l with s_0.
  double covariance0(std::size_t l) const { return n_ > 1 ? c0_.at(l) / static_cast<double>(n_ - 1) : 0.0; }
  double std_error(std::size_t l) const { return n_ > 1 ? std::sqrt(variance(l) / static_cast<double>(n_)) : 0.0; }
  double ci99(std::size_t l) const { return z99 * std_error(l); }
  Estimate estimate(std::size_t l) const { return {mean(l), std_error(l)}; }

 private:
  std::uint64_t n_ = 0, rejected_ = 0, discarded_ = 0;
  std::vector<double> mean_, m2_, c0_;
};

}  // namespace lls
