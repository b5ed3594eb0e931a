#pragma once

// Monte Carlo protocols for local spacings and the quantities derived from
// their means: ratios, covariances and local r-ratios.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "lls/accumulator.hpp"
#include "lls/error.hpp"
#include "lls/histogram.hpp"
#include "lls/parallel.hpp"
#include "lls/random.hpp"
#include "lls/spacing.hpp"
#include "lls/spectrum.hpp"

namespace lls {

struct RunOptions {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  // Line spectra: drop records whose window reaches into this fraction of
  // levels at either end of the spectrum.
  double edge_fraction = 0.0;
};

/// Record for one spectrum at phi, in units of its mean spacing for circles
/// and in native units for lines. Empty when phi hits a level, the window
/// underflows, or the window touches the excluded edges.
inline std::optional<LocalSpacingRecord> extract(const CircularSpectrum& s, double phi, std::size_t max_order,
                                                 double = 0.0) {
  try {
    auto rec = local_spacings_circle(s, phi, max_order);
    const double inv = 1.0 / s.mean_spacing();
    for (auto& x : rec.spacings) x *= inv;
    return rec;
  } catch (const DegenerateReferencePoint&) {
    return std::nullopt;
  }
}

inline std::optional<LocalSpacingRecord> extract(const LineSpectrum& s, double phi, std::size_t max_order,
                                                 double edge_fraction = 0.0) {
  try {
    auto rec = local_spacings_line(s, phi, max_order);
    if (edge_fraction > 0.0) {
      const auto n = static_cast<double>(s.size());
      const double cut = edge_fraction * n;
      if (static_cast<double>(rec.anchor) < cut || static_cast<double>(rec.anchor + max_order + 1) >= n - cut)
        return std::nullopt;
    }
    return rec;
  } catch (const DegenerateReferencePoint&) {
    return std::nullopt;
  } catch (const WindowUnderflow&) {
    return std::nullopt;
  }
}

namespace detail {

inline void check_rejections(const SpacingStats& st, double limit, const char* what) {
  const double attempted = static_cast<double>(st.count() + st.rejected());
  if (attempted > 0 && static_cast<double>(st.rejected()) > limit * attempted)
    throw Error(std::string(what) + ": " + std::to_string(st.rejected()) + " of " +
                std::to_string(static_cast<std::uint64_t>(attempted)) + " records failed");
}

}  // namespace detail

/// Protocol 1: M independent spectra from `source(seed)`, one record each at
/// the fixed point phi. Sample i uses derive_seed(options.seed, i).
template <class Source>
SpacingStats protocol1(Source&& source, double phi, std::size_t max_order, std::size_t m,
                       const RunOptions& opt = {}) {
  auto st = parallel_reduce(m, opt.workers, SpacingStats(max_order), [&](SpacingStats& acc, std::size_t i) {
    const auto spectrum = source(derive_seed(opt.seed, i));
    const auto rec = extract(spectrum, phi, max_order, opt.edge_fraction);
    if (!rec) {
      // Edge exclusions are not failures.
      if constexpr (std::is_same_v<std::decay_t<decltype(spectrum)>, LineSpectrum>) {
        if (opt.edge_fraction > 0.0 && !extract(spectrum, phi, max_order, 0.0).has_value()) acc.reject();
        else acc.discard();
      } else {
        acc.reject();
      }
      return;
    }
    acc.add(rec->spacings);
  });
  detail::check_rejections(st, 0.01, "protocol 1");
  return st;
}

/// Q reference points spread over the interior of a line spectrum, one per
/// equal slot, at least (L + 2) mean spacings apart.
inline std::vector<double> spaced_reference_points(const LineSpectrum& s, std::size_t q, std::size_t max_order,
                                                   std::uint64_t seed) {
  if (s.size() < max_order + 3) throw InsufficientLevels("spectrum too short for reference points");
  const auto lv = s.levels();
  const double mean_gap = (lv.back() - lv.front()) / static_cast<double>(lv.size() - 1);
  const double sep = static_cast<double>(max_order + 2) * mean_gap;
  const double lo = lv[1], hi = lv[lv.size() - max_order - 2];
  const double slot = (hi - lo) / static_cast<double>(q);
  if (q == 0 || slot < sep)
    throw InsufficientLevels("cannot place " + std::to_string(q) + " reference points " + std::to_string(sep) +
                             " apart");
  auto eng = make_engine(seed);
  std::vector<double> phis(q);
  for (std::size_t a = 0; a < q; ++a) phis[a] = lo + slot * static_cast<double>(a) + (slot - sep) * uniform_open(eng);
  return phis;
}

/// Protocol 2.1: many reference points on one unfolded spectrum. Underflowing
/// windows are skipped; more than 5% skips is an error.
inline SpacingStats protocol2_points(const LineSpectrum& s, std::span<const double> phis, std::size_t max_order) {
  if (phis.empty()) throw ArgumentError("protocol 2.1 needs at least one reference point");
  const auto lv = s.levels();
  if (lv.size() >= 2) {
    const double mean_gap = (lv.back() - lv.front()) / static_cast<double>(lv.size() - 1);
    std::vector<double> sorted(phis.begin(), phis.end());
    std::sort(sorted.begin(), sorted.end());
    const double sep = static_cast<double>(max_order + 2) * mean_gap;
    for (std::size_t a = 1; a < sorted.size(); ++a)
      if (sorted[a] - sorted[a - 1] < sep * (1.0 - 1e-12))
        throw ArgumentError("reference points closer than " + std::to_string(max_order + 2) + " mean spacings");
  }
  SpacingStats st(max_order);
  for (double phi : phis) {
    const auto rec = extract(s, phi, max_order);
    if (rec) st.add(rec->spacings);
    else st.reject();
  }
  detail::check_rejections(st, 0.05, "protocol 2.1");
  return st;
}

/// Protocol 2.2: one record at fixed phi per parameter value h, with
/// family(h) returning the spectrum for that parameter.
template <class Family>
SpacingStats protocol2_param(Family&& family, std::span<const double> hs, double phi, std::size_t max_order,
                             const RunOptions& opt = {}) {
  auto st = parallel_reduce(hs.size(), opt.workers, SpacingStats(max_order), [&](SpacingStats& acc, std::size_t i) {
    // An accidental coincidence of two levels spoils that draw only.
    std::optional<LocalSpacingRecord> rec;
    try {
      rec = extract(family(hs[i]), phi, max_order);
    } catch (const DegenerateSpectrum&) {
    }
    if (rec) acc.add(rec->spacings);
    else acc.reject();
  }, 16);
  detail::check_rejections(st, 0.05, "protocol 2.2");
  return st;
}

/// rho_l = <s_l>/<s_0> for l = 1..L with first-order error propagation.
inline std::vector<Estimate> ratios(const SpacingStats& st) {
  if (!(st.mean(0) > 0.0)) throw ArgumentError("ratios need a positive zeroth mean");
  const double m0 = st.mean(0);
  const double n = static_cast<double>(st.count());
  std::vector<Estimate> out;
  for (std::size_t l = 1; l <= st.max_order(); ++l) {
    const double rho = st.mean(l) / m0;
    const double var = (st.variance(l) + rho * rho * st.variance(0) - 2.0 * rho * st.covariance0(l)) / (n * m0 * m0);
    out.push_back({rho, std::sqrt(std::max(var, 0.0))});
  }
  return out;
}

/// Multi-point variant: ratios formed separately at each reference point and
/// then averaged over the points.
inline std::vector<Estimate> averaged_ratios(std::span<const SpacingStats> per_point) {
  if (per_point.empty()) throw ArgumentError("no per-point statistics");
  const std::size_t order = per_point[0].max_order();
  std::vector<Moments> acc(order);
  for (const auto& st : per_point) {
    const auto r = ratios(st);
    for (std::size_t l = 0; l < order; ++l) acc[l].add(r[l].value);
  }
  std::vector<Estimate> out;
  for (std::size_t l = 0; l < order; ++l) {
    if (per_point.size() > 1) out.push_back(acc[l].estimate());
    else out.push_back(ratios(per_point[0])[l]);
  }
  return out;
}

/// cov[s_X, s_{X+l}] = delta^2 (<s_l>/delta - 1), means in units where delta
/// is the mean consecutive spacing.
inline std::vector<Estimate> covariance_from_means(const SpacingStats& st, double delta) {
  std::vector<Estimate> out;
  for (std::size_t l = 0; l <= st.max_order(); ++l)
    out.push_back({delta * delta * (st.mean(l) / delta - 1.0), delta * st.std_error(l)});
  return out;
}

/// Local r-ratios r_l = s_{l+1}/s_l for l = 0..L: streaming means, and
/// histograms of u = r/(1+r) on [0, 1] (a bounded variable carrying the same
/// distribution information).
class LocalRStats {
 public:
  LocalRStats() = default;
  explicit LocalRStats(std::size_t max_order, std::size_t bins = 4000)
      : mean_(max_order + 1), hist_(max_order + 1, Histogram(0.0, 1.0, bins)) {}

  void add(std::span<const double> s) {
    if (s.size() < mean_.size() + 1) throw ArgumentError("record too short for local r-ratios");
    for (std::size_t l = 0; l < mean_.size(); ++l) {
      const double r = s[l + 1] / s[l];
      mean_[l].add(r);
      hist_[l].add(s[l + 1] / (s[l] + s[l + 1]));
    }
  }

  void merge(const LocalRStats& o) {
    if (o.mean_.size() != mean_.size()) throw ArgumentError("merging r-statistics of different order");
    for (std::size_t l = 0; l < mean_.size(); ++l) {
      mean_[l].merge(o.mean_[l]);
      hist_[l].merge(o.hist_[l]);
    }
  }

  std::size_t max_order() const noexcept { return mean_.empty() ? 0 : mean_.size() - 1; }
  const Moments& mean(std::size_t l) const { return mean_.at(l); }
  /// Histogram of r/(1+r).
  const Histogram& histogram(std::size_t l) const { return hist_.at(l); }

 private:
  std::vector<Moments> mean_;
  std::vector<Histogram> hist_;
};

/// Local r statistics over a batch of records.
inline LocalRStats local_r_stats(std::span<const LocalSpacingRecord> records, std::size_t max_order) {
  LocalRStats st(max_order);
  for (const auto& r : records) st.add(r.spacings);
  return st;
}

/// Poisson laws of the local r-ratios, as CDFs of u = r/(1+r):
/// r_0 has density 2/(1+r)^3, r_l (l >= 1) has density 1/(1+r)^2.
inline double poisson_r0_cdf_u(double u) { return 1.0 - (1.0 - u) * (1.0 - u); }
inline double poisson_r1_cdf_u(double u) { return u; }

/// Normalized density of the zeroth local spacings in the records.
inline Histogram histogram_p0(std::span<const LocalSpacingRecord> records, std::size_t bins = 200, double s_max = 4.0) {
  Histogram h(0.0, s_max, bins);
  for (const auto& r : records) h.add(r.spacings.at(0));
  return h;
}

}  // namespace lls
