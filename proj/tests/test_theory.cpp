#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lls/fredholm.hpp"
#include "lls/quadrature.hpp"
#include "lls/theory.hpp"

using namespace lls;
using std::numbers::pi;

namespace {

// Second derivative of E_2(0; s) by central differences of the Fredholm
// determinant, independent of the Painleve table.
double fredholm_p2(double s) {
  const double h = 2e-3;
  auto e = [](double x) { return fredholm_counts(x, 0, 80)[0]; };
  return (-e(s + 2 * h) + 16 * e(s + h) - 30 * e(s) + 16 * e(s - h) - e(s - 2 * h)) / (12 * h * h);
}

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const auto q = gauss_legendre(10, -1.0, 3.0);
  double sum_w = 0;
  for (double w : q.weights) sum_w += w;
  EXPECT_NEAR(sum_w, 4.0, 1e-14);
  for (int p = 0; p <= 19; ++p) {
    double v = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) v += q.weights[i] * std::pow(q.nodes[i], p);
    const double exact = (std::pow(3.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
    EXPECT_NEAR(v / exact, 1.0, 1e-12) << "degree " << p;
  }
  EXPECT_THROW(gauss_legendre(0), ArgumentError);
}

TEST(Fredholm, KernelTraceIsIntervalLength) {
  for (double lambda : {0.5, 2.0, 7.0}) {
    const auto mu = sine_kernel_eigenvalues(lambda, 60);
    EXPECT_NEAR(mu.sum(), lambda, 1e-12);
    EXPECT_GE(mu.minCoeff(), -1e-12);
    EXPECT_LE(mu.maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(Fredholm, CountProbabilitiesSumToOne) {
  for (double lambda : {0.3, 1.0, 4.0, 10.0}) {
    const auto e = fredholm_counts(lambda, 40);
    double total = 0, mean = 0;
    for (std::size_t l = 0; l < e.size(); ++l) {
      EXPECT_GE(e[l], 0.0);
      total += e[l];
      mean += static_cast<double>(l) * e[l];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mean, lambda, 1e-10);
  }
  EXPECT_THROW(fredholm_counts(25.0, 2), ArgumentError);
  EXPECT_THROW(fredholm_counts(1.0, 2, 10), ArgumentError);
}

TEST(Fredholm, SmallIntervalExpansion) {
  // E_2(0; s) = 1 - s + pi^2 s^4 / 36 + O(s^6).
  const double s = 0.02;
  EXPECT_NEAR(fredholm_counts(s, 0)[0], 1 - s + pi * pi * std::pow(s, 4) / 36, 1e-10);
}

TEST(Painleve, GapMatchesFredholmDeterminant) {
  for (double s = 0.0; s <= 3.0; s += 0.05)
    EXPECT_NEAR(gap_probability(2, s), fredholm_counts(s, 0, 80)[0], 1e-6) << "s = " << s;
}

TEST(Painleve, SeriesAndIntegrationJoinSmoothly) {
  const auto& t = default_sigma0();
  const double t0 = Sigma0Table::t0;
  const auto a = t.at(t0 * (1 - 1e-9)), b = t.at(t0 * (1 + 1e-9));
  EXPECT_NEAR(a.sigma, b.sigma, 1e-10);
  EXPECT_NEAR(a.dsigma, b.dsigma, 1e-10);
  // With t = 2 pi s: sigma = -x - x^2 - ..., x = t / (2 pi).
  const auto& c = t.taylor();
  EXPECT_NEAR(static_cast<double>(c[1]), -1 / (2 * pi), 1e-15);
  EXPECT_NEAR(static_cast<double>(c[2]), -1 / (4 * pi * pi), 1e-15);
  EXPECT_GE(t.t_max(), 64.0 - 1e-9);
  EXPECT_THROW(t.at(100.0), ArgumentError);
}

TEST(Gap, MonotoneFromOne) {
  for (int beta : {0, 1, 2, 4}) {
    EXPECT_DOUBLE_EQ(gap_probability(beta, 0.0), 1.0);
    double prev = 1.0;
    for (double s = 0.01; s <= 5.0; s += 0.01) {
      const double e = gap_probability(beta, s);
      EXPECT_LE(e, prev + 1e-12) << "beta " << beta << " s " << s;
      EXPECT_GE(e, 0.0);
      prev = e;
    }
    EXPECT_LT(prev, 1e-2);
  }
  EXPECT_THROW(gap_probability(3, 1.0), ArgumentError);
  EXPECT_THROW(gap_probability(2, -0.1), ArgumentError);
}

TEST(Gap, PoissonClosedForm) {
  for (double s : {0.0, 0.5, 2.0}) EXPECT_DOUBLE_EQ(gap_probability(0, s), std::exp(-s));
  const auto p = spacing_pdf(0);
  EXPECT_DOUBLE_EQ(p(1.0), std::exp(-1.0));
  for (std::size_t l = 0; l <= 8; ++l) EXPECT_EQ(mean_lls_theory(0, l), l == 0 ? 2.0 : 1.0);
}

TEST(Density, NormalizedWithUnitMean) {
  for (int beta : {1, 2, 4}) {
    const auto p = spacing_pdf(beta);
    EXPECT_NEAR(p.moment(0), 1.0, 1e-4) << beta;
    EXPECT_NEAR(p.moment(1), 1.0, 1e-4) << beta;
    const auto p0 = p0_pdf(beta);
    EXPECT_NEAR(p0.moment(0), 1.0, 1e-4) << beta;
    for (double v : p.values) EXPECT_GE(v, 0.0);
  }
}

TEST(Density, SmallSpacingLaws) {
  // p_1 ~ pi^2 s / 6, p_2 ~ pi^2 s^2 / 3, p_4 ~ 16 pi^4 s^4 / 135.
  const double s = 0.01;
  EXPECT_NEAR(spacing_pdf(1)(s) / (pi * pi * s / 6), 1.0, 0.01);
  EXPECT_NEAR(spacing_pdf(2)(s) / (pi * pi * s * s / 3), 1.0, 0.01);
  const double c4 = 16 * std::pow(pi, 4) / 135;
  EXPECT_NEAR(spacing_pdf(4)(0.05) / (c4 * std::pow(0.05, 4)), 1.0, 0.05);

  // Log-log slopes near the origin: beta for p, beta + 1 for p0.
  for (int beta : {1, 2, 4}) {
    const auto p = spacing_pdf(beta), p0 = p0_pdf(beta);
    const double a = 0.02, b = 0.04;
    EXPECT_NEAR(std::log(p(b) / p(a)) / std::log(b / a), beta, 0.05);
    EXPECT_NEAR(std::log(p0(b) / p0(a)) / std::log(b / a), beta + 1, 0.05);
  }
}

TEST(Density, UnitaryMatchesFredholmSecondDerivative) {
  const auto p = spacing_pdf(2);
  for (double s : {0.3, 0.8, 1.0, 1.6, 2.5}) EXPECT_NEAR(p(s), fredholm_p2(s), 1e-4) << "s = " << s;
}

TEST(Density, RejectsMisalignedStep) {
  EXPECT_THROW(spacing_pdf(2, 5.0, default_sigma0(), 1.5e-3), ArgumentError);
  EXPECT_THROW(spacing_pdf(3), ArgumentError);
}

TEST(Means, UnitaryMatchesTable) {
  const auto& ref = reference_constants().means.at(2);
  for (std::size_t l = 0; l <= 4; ++l) EXPECT_NEAR(mean_lls_theory(2, l), ref[l], 1e-4) << "l = " << l;
  EXPECT_NEAR(mean_lls_theory(2, 0), 1.17999, 1e-5);
  EXPECT_THROW(mean_lls_theory(1, 0), ArgumentError);
  EXPECT_THROW(mean_lls_theory(2, 9), ArgumentError);
}

TEST(Means, ApproachOneFromBelowBeyondZero) {
  double prev = 0;
  for (std::size_t l = 1; l <= 8; ++l) {
    const double m = mean_lls_theory(2, l);
    EXPECT_LT(m, 1.0);
    EXPECT_GT(m, prev);
    prev = m;
  }
}

TEST(Means, ZerothMeanIsSecondMomentOfSpacing) {
  // <s_0> = <s^2> under the consecutive spacing law.
  const auto& ref = reference_constants().means;
  for (int beta : {1, 2, 4}) EXPECT_NEAR(spacing_pdf(beta).moment(2), ref.at(beta)[0], 2e-4) << beta;
}

TEST(Constants, RatiosConsistentWithMeans) {
  const auto& c = reference_constants();
  for (int beta : {0, 1, 2, 4})
    for (std::size_t l = 1; l <= 3; ++l)
      EXPECT_NEAR(c.ratios.at(beta)[l - 1], c.means.at(beta)[l] / c.means.at(beta)[0], 1e-4);
  EXPECT_DOUBLE_EQ(c.mean_r.at(1), 1.7781);
  EXPECT_DOUBLE_EQ(c.mean_r.at(2), 1.3684);
  EXPECT_DOUBLE_EQ(c.mean_r.at(4), 1.1769);
  EXPECT_DOUBLE_EQ(c.billiard[0], 1.99812);
  EXPECT_DOUBLE_EQ(c.riemann_zeros[0], 1.17846);
}
