#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lls/experiments.hpp"
#include "lls/syk.hpp"

using namespace lls;
using Eigen::MatrixXcd;

namespace {

const cplx I(0.0, 1.0);

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// chi_{2k-1} = Z..Z X I..I / sqrt2 and chi_{2k} = Z..Z Y I..I / sqrt2, written
// out with Kronecker products, k = 1..n/2.
std::vector<MatrixXcd> kronecker_majoranas(std::size_t n) {
  MatrixXcd x(2, 2), y(2, 2), z(2, 2), id = MatrixXcd::Identity(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -I, I, 0;
  z << 1, 0, 0, -1;
  const std::size_t q = n / 2;
  std::vector<MatrixXcd> out;
  for (std::size_t k = 0; k < q; ++k)
    for (const MatrixXcd* mid : {&x, &y}) {
      MatrixXcd m = MatrixXcd::Identity(1, 1);
      for (std::size_t j = 0; j < q; ++j) m = kron(m, j < k ? z : j == k ? *mid : id);
      out.push_back(m / std::sqrt(2.0));
    }
  return out;
}

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigs(const MatrixXcd& h) {
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(h);
  std::vector<double> e(ev.data(), ev.data() + ev.size());
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST(Majorana, MatchesKroneckerConstruction) {
  for (std::size_t n : {2u, 4u, 6u, 8u}) {
    const auto ops = majorana_ops(n);
    const auto want = kronecker_majoranas(n);
    ASSERT_EQ(ops.size(), n);
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(max_abs(ops[k] - want[k]), 0.0) << n << ' ' << k;
  }
}

TEST(Majorana, TwoByTwo) {
  const auto ops = majorana_ops(2);
  const MatrixXcd half = 0.5 * MatrixXcd::Identity(2, 2);
  // (1/sqrt 2)^2 rounds to half within one ulp.
  EXPECT_LT(max_abs(ops[0] * ops[0] - half), 2e-16);
  EXPECT_LT(max_abs(ops[1] * ops[1] - half), 2e-16);
  EXPECT_EQ(max_abs(ops[0] * ops[1] + ops[1] * ops[0]), 0.0);
}

TEST(Majorana, CliffordAlgebraAndEntries) {
  const auto ops = majorana_ops(8);
  const auto id = MatrixXcd::Identity(16, 16);
  int pairs = 0;
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = a; b < 8; ++b, ++pairs) {
      const MatrixXcd ac = ops[a] * ops[b] + ops[b] * ops[a];
      EXPECT_LT(max_abs(ac - (a == b ? MatrixXcd(id) : MatrixXcd::Zero(16, 16))), 1e-15);
    }
  EXPECT_EQ(pairs, 36);
  const double r = 1 / std::sqrt(2.0);
  for (const auto& m : ops) {
    EXPECT_EQ(max_abs(m - m.adjoint()), 0.0);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const cplx v = m(i);
      const bool ok = v == 0.0 || v == r || v == -r || v == I * r || v == -I * r;
      EXPECT_TRUE(ok) << v;
    }
  }
}

TEST(Majorana, PauliProductMatchesMatrices) {
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      const auto p = majorana_string(a, 4), q = majorana_string(b, 4);
      EXPECT_LT(max_abs(to_matrix(p * q, 4) - to_matrix(p, 4) * to_matrix(q, 4)), 1e-15);
    }
}

TEST(SykConfig, Validation) {
  EXPECT_THROW((SykConfig{15, 4.0, 0}.validate()), ArgumentError);
  EXPECT_THROW((SykConfig{16, 0.0, 0}.validate()), ArgumentError);
  EXPECT_THROW((SykConfig{40, 4.0, 0}.validate()), ResourceError);
  EXPECT_THROW(majorana_ops(26), ResourceError);
  EXPECT_NO_THROW((SykConfig{28, 4.0, 0}.validate()));
}

TEST(Couplings, CountVarianceAndSeeds) {
  EXPECT_EQ(sample_couplings({8, 4.0, 1}).size(), 70u);
  const auto a = sample_couplings({16, 4.0, 2}), b = sample_couplings({16, 4.0, 2});
  ASSERT_EQ(a.size(), 1820u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].value, b[k].value);
    EXPECT_EQ(a[k].index, b[k].index);
    EXPECT_TRUE(a[k].index[0] < a[k].index[1] && a[k].index[1] < a[k].index[2] && a[k].index[2] < a[k].index[3]);
  }
  double sum = 0, sq = 0;
  std::size_t count = 0;
  for (std::uint64_t s = 0; count < 100000; ++s)
    for (const auto& c : sample_couplings({16, 4.0, derive_seed(3, s)})) {
      sum += c.value;
      sq += c.value * c.value;
      ++count;
    }
  const double mean = sum / count, var = sq / count - mean * mean;
  EXPECT_NEAR(var / (6.0 * 16.0 / (16.0 * 16.0 * 16.0)), 1.0, 0.02);
}

TEST(Hamiltonian, SingleCoupling) {
  const auto ops = majorana_ops(8);
  const auto h = build_hamiltonian(ops, {{{0, 1, 2, 3}, 1.0}});
  EXPECT_LT(max_abs(h - ops[0] * ops[1] * ops[2] * ops[3]), 1e-15);
  EXPECT_LT(max_abs(h * h - MatrixXcd::Identity(16, 16) / 16.0), 1e-15);
}

TEST(Hamiltonian, HermitianAndParityConserving) {
  const SykConfig c{12, 4.0, 5};
  const auto ops = majorana_ops(12);
  const auto h = build_hamiltonian(ops, sample_couplings(c));
  EXPECT_LT(max_abs(h - h.adjoint()), 1e-12);
  MatrixXcd chain = MatrixXcd::Identity(64, 64);
  for (const auto& m : ops) chain = chain * m;
  const MatrixXcd p = std::pow(2.0, 6) * chain;
  EXPECT_LT(max_abs(p - parity_operator(12)), 1e-12);
  EXPECT_LT(max_abs(h * p - p * h), 1e-12);
}

TEST(Hamiltonian, EvenBlockIsTheDenseSubmatrix) {
  for (std::size_t n : {8u, 10u, 12u}) {
    const SykConfig c{n, 4.0, 6};
    const auto couplings = sample_couplings(c);
    const auto dense = build_hamiltonian(majorana_ops(n), couplings);
    const auto states = even_parity_states(c.qubits());
    const auto block = even_block_hamiltonian(c, couplings);
    ASSERT_EQ(static_cast<std::size_t>(block.rows()), states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = 0; j < states.size(); ++j)
        EXPECT_LT(std::abs(block(i, j) - dense(states[i], states[j])), 1e-13);
  }
}

TEST(Hamiltonian, ParityBlocksKeepEveryEigenvalue) {
  const SykConfig c{10, 4.0, 7};
  const auto dense = build_hamiltonian(majorana_ops(10), sample_couplings(c));
  const auto even = even_parity_states(5);
  std::vector<std::uint64_t> odd;
  for (std::uint64_t s = 0; s < 32; ++s)
    if (std::find(even.begin(), even.end(), s) == even.end()) odd.push_back(s);
  auto sub = [&](const std::vector<std::uint64_t>& idx) {
    MatrixXcd m(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = dense(idx[i], idx[j]);
    return m;
  };
  auto both = sorted_eigs(sub(even));
  const auto o = sorted_eigs(sub(odd));
  both.insert(both.end(), o.begin(), o.end());
  std::sort(both.begin(), both.end());
  const auto full = sorted_eigs(dense);
  ASSERT_EQ(both.size(), 32u);
  for (std::size_t k = 0; k < 32; ++k) EXPECT_NEAR(both[k], full[k], 1e-12);
}

TEST(Spectrum, BlockSizesAndKramers) {
  const auto s16 = syk_spectrum({16, 4.0, 8});
  EXPECT_EQ(s16.block_dimension, 128u);
  EXPECT_EQ(s16.levels.size(), 128u);
  EXPECT_FALSE(s16.kramers);

  for (std::size_t n : {12u, 20u}) {
    const SykConfig c{n, 4.0, 9};
    const auto e = sorted_eigs(even_block_hamiltonian(c, sample_couplings(c)));
    const double width = e.back() - e.front();
    for (std::size_t k = 0; k + 1 < e.size(); k += 2) {
      EXPECT_LT(e[k + 1] - e[k], 1e-10 * width);
      if (k + 2 < e.size()) {
        EXPECT_GT(e[k + 2] - e[k + 1], 1e-10 * width);
      }
    }
    const auto s = syk_spectrum(c);
    EXPECT_TRUE(s.kramers);
    EXPECT_EQ(s.levels.size(), e.size() / 2);
  }
}

TEST(Spectrum, StrictlyIncreasingRawLevels) {
  const auto s = syk_spectrum({18, 4.0, 10});
  EXPECT_EQ(s.levels.scale(), Scale::raw);
  EXPECT_EQ(s.levels.size(), 256u);
  for (std::size_t k = 1; k < s.levels.size(); ++k) EXPECT_GT(s.levels[k], s.levels[k - 1]);
}

TEST(Spectrum, ScaleCovariance) {
  const SykConfig c{16, 4.0, 11};
  auto couplings = sample_couplings(c);
  const auto base = syk_spectrum_from(c, couplings);
  for (auto& x : couplings) x.value *= 2.5;
  const auto scaled = syk_spectrum_from(c, couplings);
  for (std::size_t k = 0; k < base.levels.size(); ++k)
    EXPECT_NEAR(scaled.levels[k], 2.5 * base.levels[k], 1e-12 * std::max(1.0, std::fabs(base.levels[k])));

  SykRunConfig r{16, 4.0, 100, 0.0, 3, 0.05, 12, 1};
  SykRunConfig rs = r;
  rs.coupling = 4.0 * 3.7;
  const auto a = run_syk(r), b = run_syk(rs);
  for (std::size_t l = 0; l <= 3; ++l) EXPECT_NEAR(b.mean(l) / a.mean(l), 3.7, 1e-12);
  const auto ra = ratios(a), rb = ratios(b);
  for (std::size_t l = 0; l < ra.size(); ++l) EXPECT_NEAR(rb[l].value, ra[l].value, 1e-12);
}

TEST(Spectrum, SymmetryClasses) {
  EXPECT_EQ(syk_beta(16), 1);
  EXPECT_EQ(syk_beta(24), 1);
  EXPECT_EQ(syk_beta(18), 2);
  EXPECT_EQ(syk_beta(22), 2);
  EXPECT_EQ(syk_beta(20), 4);
  EXPECT_EQ(syk_beta(12), 4);
}
