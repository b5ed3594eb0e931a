#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "lls/ensembles.hpp"
#include "lls/random.hpp"
#include "lls/spacing.hpp"
#include "lls/statistics.hpp"

using namespace lls;
using std::numbers::pi;

namespace {

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = cdf(x[k]);
    d = std::max({d, std::fabs(f - k / n), std::fabs(f - (k + 1) / n)});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

// N = 2 circular ensembles: the arc from one eigenvalue to the other has
// density proportional to sin^beta(s/2) on (0, 2pi). The sorted difference
// theta_1 - theta_0 picks that arc with probability 1 - s/2pi (the first
// point is uniform), which folds in the same factor as the range of two
// uniform points. Its CDF is tabulated by the trapezoid rule.
std::function<double(double)> two_point_cdf(int beta) {
  const int n = 1 << 16;
  const double h = 2 * pi / n;
  auto f = [&](double s) { return (1 - s / (2 * pi)) * std::pow(std::sin(s / 2), beta); };
  auto table = std::make_shared<std::vector<double>>(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) (*table)[k] = (*table)[k - 1] + 0.5 * h * (f((k - 1) * h) + f(k * h));
  const double total = table->back();
  for (auto& v : *table) v /= total;
  return [table, h](double s) {
    const double x = s / h;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(x), table->size() - 2);
    const double t = x - static_cast<double>(k);
    return (1 - t) * (*table)[k] + t * (*table)[k + 1];
  };
}

std::vector<double> pooled_spacings(const EnsembleConfig& base, std::size_t m) {
  std::vector<double> out;
  out.reserve(m * base.n_levels);
  for (std::size_t i = 0; i < m; ++i) {
    auto c = base;
    c.seed = derive_seed(base.seed, i);
    const auto s = sample_cbe(c);
    for (double x : consecutive_spacings(s).spacings) out.push_back(x / s.mean_spacing());
  }
  return out;
}

}  // namespace

TEST(EnsembleConfig, Validation) {
  EXPECT_THROW((EnsembleConfig{3, 8, 0, Method::cmv}.validate()), ArgumentError);
  EXPECT_THROW((EnsembleConfig{2, 1, 0, Method::cmv}.validate()), ArgumentError);
  EXPECT_THROW((EnsembleConfig{1, 8, 0, Method::haar_qr}.validate()), ArgumentError);
  EXPECT_NO_THROW((EnsembleConfig{0, 8, 0, Method::haar_qr}.validate()));
}

TEST(SampleCbe, ReproducibleAndValid) {
  for (int beta : {1, 2, 4}) {
    const EnsembleConfig c{beta, 64, 99, Method::cmv};
    const auto a = sample_cbe(c), b = sample_cbe(c);
    EXPECT_TRUE(std::equal(a.angles().begin(), a.angles().end(), b.angles().begin()));
    ASSERT_EQ(a.n_levels(), 64u);
    for (std::size_t k = 1; k < 64; ++k) EXPECT_LT(a[k - 1], a[k]);
    const auto other = sample_cbe({beta, 64, 100, Method::cmv});
    EXPECT_NE(a[0], other[0]);
  }
  const auto q1 = sample_cbe({2, 16, 5, Method::haar_qr}), q2 = sample_cbe({2, 16, 5, Method::haar_qr});
  EXPECT_TRUE(std::equal(q1.angles().begin(), q1.angles().end(), q2.angles().begin()));
}

TEST(SampleCbe, TwoPointLaw) {
  for (int beta : {1, 2, 4}) {
    std::vector<double> gaps;
    for (std::size_t i = 0; i < 100000; ++i) {
      const auto s = sample_cbe({beta, 2, derive_seed(21, i), Method::cmv});
      gaps.push_back(s[1] - s[0]);
    }
    EXPECT_LT(ks_one_sample(gaps, two_point_cdf(beta)), 0.01) << "beta " << beta;
  }
}

TEST(SampleCbe, HaarQrTwoPointLaw) {
  std::vector<double> gaps;
  for (std::size_t i = 0; i < 100000; ++i) {
    const auto s = sample_cbe({2, 2, derive_seed(22, i), Method::haar_qr});
    gaps.push_back(s[1] - s[0]);
  }
  EXPECT_LT(ks_one_sample(gaps, two_point_cdf(2)), 0.01);
}

TEST(SampleCbe, CmvAgreesWithHaarQr) {
  const auto a = pooled_spacings({2, 64, 23, Method::cmv}, 100000);
  const auto b = pooled_spacings({2, 64, 24, Method::haar_qr}, 100000);
  EXPECT_LT(ks_two_sample(a, b), 0.005);
}

TEST(SampleCbe, ZerothSpacingExceedsTheOthers) {
  for (int beta : {1, 2, 4}) {
    const EnsembleConfig c{beta, 64, 0, Method::cmv};
    const auto st = protocol1([&](std::uint64_t s) { auto e = c; e.seed = s; return sample_cbe(e); }, pi, 4, 4000,
                              RunOptions{static_cast<std::uint64_t>(30 + beta), 1, 0.0});
    EXPECT_GT((st.mean(0) - 1.0) / st.std_error(0), 5.0);
    for (std::size_t l = 1; l <= 4; ++l) {
      const double se = std::hypot(st.std_error(0), st.std_error(l));
      EXPECT_GT((st.mean(0) - st.mean(l)) / se, 5.0) << beta << ' ' << l;
    }
  }
}

TEST(PoissonCircle, SingleAngleIsUniform) {
  const int m = 100000;
  double sum = 0;
  for (int i = 0; i < m; ++i) sum += sample_poisson_circle(1, derive_seed(40, i))[0];
  EXPECT_NEAR(sum / m, pi, 3 * (2 * pi / std::sqrt(12.0)) / std::sqrt(m));
}

TEST(PoissonCircle, SpacingsSumAndLocalMeans) {
  const auto s = sample_poisson_circle(1024, 41);
  double total = 0;
  for (double x : consecutive_spacings(s).spacings) total += x;
  EXPECT_NEAR(total, 2 * pi, 1e-12);

  const auto st = protocol1([](std::uint64_t seed) { return sample_poisson_circle(1024, seed); }, 1.0, 1, 200000,
                            RunOptions{42, 1, 0.0});
  EXPECT_NEAR(st.mean(0), 2.0, st.ci99(0));
  EXPECT_NEAR(st.mean(1), 1.0, st.ci99(1));
}

TEST(PoissonLine, GapMeanAndCountLaw) {
  const auto line = sample_poisson_line(1.0, 1000000, 43);
  EXPECT_EQ(line.scale(), Scale::unfolded);
  EXPECT_EQ(sample_poisson_line(2.0, 10, 1).scale(), Scale::raw);
  const auto lv = line.levels();
  EXPECT_NEAR((lv.back() - lv.front()) / (lv.size() - 1), 1.0, 0.003);

  // Counts in disjoint windows of length 2.
  std::vector<double> counts;
  std::size_t k = 0;
  for (double a = 0.0; a + 2.0 < lv.back(); a += 2.0) {
    std::size_t c = 0;
    while (k < lv.size() && lv[k] < a + 2.0) {
      ++c;
      ++k;
    }
    counts.push_back(static_cast<double>(c));
  }
  double mean = 0, var = 0;
  for (double c : counts) mean += c;
  mean /= counts.size();
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= counts.size() - 1;
  EXPECT_NEAR(var / mean, 1.0, 0.01);
}

TEST(PoissonLine, ZerothLocalSpacingOverRandomPoints) {
  const auto line = sample_poisson_line(1.0, 1000000, 44);
  auto eng = make_engine(45);
  double sum = 0;
  const int q = 1000000;
  const double lo = line[10], hi = line[line.size() - 10];
  for (int i = 0; i < q; ++i) sum += local_spacings_line(line, lo + (hi - lo) * uniform_open(eng), 1).spacings[0];
  EXPECT_NEAR(sum / q, 2.0, 0.01);
}

TEST(PoissonLine, Validation) {
  EXPECT_THROW(sample_poisson_line(0.0, 10, 1), ArgumentError);
  EXPECT_THROW(sample_poisson_line(1.0, 1, 1), ArgumentError);
}
