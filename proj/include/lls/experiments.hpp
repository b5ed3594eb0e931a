#pragma once

// Monte Carlo drivers shared by the command-line tool and the acceptance
// suite: circular ensembles with every estimator the checks need, SYK
// spectra, billiard families and zeta zeros.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lls/accumulator.hpp"
#include "lls/deterministic.hpp"
#include "lls/ensembles.hpp"
#include "lls/histogram.hpp"
#include "lls/parallel.hpp"
#include "lls/random.hpp"
#include "lls/spacing.hpp"
#include "lls/statistics.hpp"
#include "lls/syk.hpp"

namespace lls {

struct CircleRunConfig {
  int beta = 2;
  std::size_t n_levels = 64;
  std::size_t samples = 10000;
  double phi = 0.0;
  std::size_t max_order = 9;    // local spacings s_0..s_L; r-ratios up to L-1
  std::size_t biased_order = 4; // size-biased estimator orders 0..this
  std::uint64_t seed = 1;
  Method method = Method::cmv;
  std::size_t workers = 1;
  bool histograms = false;
};

/// Everything one pass over a circular ensemble collects, all in units of
/// the mean spacing.
struct CircleRun {
  SpacingStats local;          // protocol 1 at phi
  SpacingStats size_biased;    // per-spectrum size-biased means
  Moments lag1;                // per-spectrum lag-1 autocovariance of spacings
  LocalRStats r;
  std::optional<Histogram> p0, p0_log, spacing_log, spacing;

  void merge(const CircleRun& o) {
    local.merge(o.local);
    size_biased.merge(o.size_biased);
    lag1.merge(o.lag1);
    r.merge(o.r);
    if (p0) {
      p0->merge(*o.p0);
      p0_log->merge(*o.p0_log);
      spacing_log->merge(*o.spacing_log);
      spacing->merge(*o.spacing);
    }
  }
};

/// Geometric bins, 5 per decade over [1e-4, 10].
inline Histogram origin_histogram() { return Histogram::geometric(1e-4, 10.0, 25); }

inline CircleRun run_circle(const CircleRunConfig& cfg) {
  EnsembleConfig ec{cfg.beta, cfg.n_levels, 0, cfg.method};
  ec.validate();
  if (cfg.max_order < 1 || cfg.max_order >= cfg.n_levels) throw ArgumentError("max order outside [1, N-1]");
  if (cfg.biased_order >= cfg.n_levels) throw ArgumentError("size-biased order outside [0, N-1]");
  CircleRun proto{SpacingStats(cfg.max_order), SpacingStats(cfg.biased_order), {}, LocalRStats(cfg.max_order - 1), {}, {}, {}, {}};
  if (cfg.histograms) {
    proto.p0 = Histogram(0.0, 4.0, 200);
    proto.spacing = Histogram(0.0, 4.0, 200);
    proto.p0_log = origin_histogram();
    proto.spacing_log = origin_histogram();
  }
  auto out = parallel_reduce(cfg.samples, cfg.workers, proto, [&](CircleRun& acc, std::size_t i) {
    EnsembleConfig c = ec;
    c.seed = derive_seed(cfg.seed, i);
    const auto spectrum = sample_cbe(c);
    const auto rec = extract(spectrum, cfg.phi, cfg.max_order);
    if (!rec) {
      acc.local.reject();
      return;
    }
    acc.local.add(rec->spacings);
    acc.r.add(rec->spacings);

    const double delta = spectrum.mean_spacing();
    const auto cs = consecutive_spacings(spectrum);
    std::vector<double> sb(cfg.biased_order + 1);
    for (std::size_t l = 0; l <= cfg.biased_order; ++l) sb[l] = size_biased_mean(cs, l) / delta;
    acc.size_biased.add(sb);

    const std::size_t n = cs.size();
    double c1 = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      c1 += (cs.spacings[k] / delta - 1.0) * (cs.spacings[(k + 1) % n] / delta - 1.0);
    acc.lag1.add(c1 / static_cast<double>(n));

    if (acc.p0) {
      acc.p0->add(rec->spacings[0]);
      acc.p0_log->add(rec->spacings[0]);
      for (double s : cs.spacings) {
        acc.spacing_log->add(s / delta);
        acc.spacing->add(s / delta);
      }
    }
  }, 64);
  detail::check_rejections(out.local, 0.01, "circular ensemble run");
  return out;
}

struct SykRunConfig {
  std::size_t n_majorana = 16;
  double coupling = 4.0;
  std::size_t samples = 1000;
  double phi = 0.0;
  std::size_t max_order = 3;
  double edge_fraction = 0.05;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Protocol 1 on raw even-block SYK spectra.
inline SpacingStats run_syk(const SykRunConfig& cfg) {
  RunOptions opt{cfg.seed, cfg.workers, cfg.edge_fraction};
  return protocol1(
      [&](std::uint64_t seed) {
        SykConfig c{cfg.n_majorana, cfg.coupling, seed};
        return syk_spectrum(c).levels;
      },
      cfg.phi, cfg.max_order, cfg.samples, opt);
}

struct BilliardRunConfig {
  double area = 4.0 * std::numbers::pi;
  double aspect_lo = 1.2, aspect_hi = 3.0;
  double energy_center = 1e8;
  double window_halfwidth = 600.0;
  std::size_t samples = 10000;  // Q aspect ratios
  std::size_t max_order = 4;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Uniform aspect ratios on [lo, hi], one per parameter draw.
inline std::vector<double> draw_aspects(const BilliardRunConfig& cfg) {
  auto eng = make_engine(cfg.seed);
  std::vector<double> hs(cfg.samples);
  for (auto& h : hs) h = cfg.aspect_lo + (cfg.aspect_hi - cfg.aspect_lo) * uniform_open(eng);
  return hs;
}

/// Protocol 2.2 over aspect ratios at the unfolded image of the energy center.
inline SpacingStats run_billiard(const BilliardRunConfig& cfg) {
  if (!(cfg.aspect_lo > 0.0 && cfg.aspect_hi > cfg.aspect_lo)) throw ArgumentError("bad aspect ratio range");
  const auto hs = draw_aspects(cfg);
  RunOptions opt{cfg.seed, cfg.workers, 0.0};
  return protocol2_param(
      [&](double h) {
        BilliardConfig b{cfg.area, h, cfg.energy_center, cfg.window_halfwidth};
        return billiard_unfolded_centered(b);
      },
      hs, 0.0, cfg.max_order, opt);
}

/// Protocol 2.1 on an unfolded zeros dataset with q spaced reference points.
inline SpacingStats run_zeros(const ZerosDataset& ds, std::size_t q, std::size_t max_order, std::uint64_t seed) {
  const auto unfolded = riemann_unfold(above_unfolding_threshold(ds));
  const auto phis = spaced_reference_points(unfolded, q, max_order, seed);
  return protocol2_points(unfolded, phis, max_order);
}

}  // namespace lls
