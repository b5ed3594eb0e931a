#pragma once

// SYK_4 model: Majorana operators from Jordan-Wigner strings, Gaussian
// four-body couplings, and the even-parity block spectrum.
//
// Qubit j (0-based) sits at bit (q - 1 - j) of the basis index, q = n/2, so
// matrices agree with the Kronecker product Z x ... x X x I x ... written left
// to right.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lls/error.hpp"
#include "lls/linalg.hpp"
#include "lls/random.hpp"
#include "lls/spectrum.hpp"

namespace lls {

using cplx = std::complex<double>;

struct SykConfig {
  std::size_t n_majorana = 16;
  double coupling = 4.0;  // J
  std::uint64_t seed = 0;
  std::size_t max_dimension = std::size_t{1} << 14;  // full Hilbert space

  std::size_t qubits() const noexcept { return n_majorana / 2; }
  std::size_t dimension() const noexcept { return std::size_t{1} << qubits(); }

  void validate() const {
    if (n_majorana < 2 || n_majorana % 2) throw ArgumentError("number of Majoranas must be even and positive");
    if (n_majorana > 60 || dimension() > max_dimension)
      throw ResourceError("Hilbert dimension 2^" + std::to_string(qubits()) + " exceeds the budget of " +
                          std::to_string(max_dimension));
    if (!(coupling > 0.0)) throw ArgumentError("coupling J must be positive");
  }
};

/// phase * X^x Z^z acting on basis states: |s> -> phase (-1)^{popcount(z & s)} |s ^ x>.
struct PauliString {
  std::uint64_t x = 0, z = 0;
  cplx phase = 1.0;

  PauliString operator*(const PauliString& o) const noexcept {
    // Z^z1 X^x2 = (-1)^{popcount(z1 & x2)} X^x2 Z^z1
    const double sign = std::popcount(z & o.x) % 2 ? -1.0 : 1.0;
    return {x ^ o.x, z ^ o.z, phase * o.phase * sign};
  }
};

/// Majorana k (0-based) as a Pauli string: Z on qubits < k/2, X (k even) or
/// Y = i X Z (k odd) on qubit k/2, weight 1/sqrt(2).
inline PauliString majorana_string(std::size_t k, std::size_t qubits) {
  const std::size_t j = k / 2;
  if (j >= qubits) throw ArgumentError("Majorana index out of range");
  auto bit = [&](std::size_t q) { return std::uint64_t{1} << (qubits - 1 - q); };
  PauliString p;
  for (std::size_t q = 0; q < j; ++q) p.z |= bit(q);
  p.x = bit(j);
  p.phase = 1.0 / std::sqrt(2.0);
  if (k % 2) {
    // Y = i X Z on qubit j; the Z string lives on other qubits and commutes.
    p.z |= bit(j);
    p.phase *= cplx(0.0, 1.0);
  }
  return p;
}

inline Eigen::MatrixXcd to_matrix(const PauliString& p, std::size_t qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t s = 0; s < dim; ++s) {
    const double sign = std::popcount(p.z & s) % 2 ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(s ^ p.x), static_cast<Eigen::Index>(s)) = p.phase * sign;
  }
  return m;
}

/// Dense Majorana matrices chi_1..chi_n with {chi_j, chi_k} = delta_jk.
/// The Clifford relations are verified exhaustively for n <= 12.
inline std::vector<Eigen::MatrixXcd> majorana_ops(std::size_t n_majorana,
                                                  std::size_t max_dimension = std::size_t{1} << 12) {
  SykConfig cfg;
  cfg.n_majorana = n_majorana;
  cfg.max_dimension = max_dimension;
  cfg.validate();
  const std::size_t q = cfg.qubits();
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(n_majorana);
  for (std::size_t k = 0; k < n_majorana; ++k) ops.push_back(to_matrix(majorana_string(k, q), q));
  const auto dim = static_cast<Eigen::Index>(cfg.dimension());
  const auto id = Eigen::MatrixXcd::Identity(dim, dim);
  const std::size_t checked = n_majorana <= 12 ? n_majorana : 2;
  for (std::size_t a = 0; a < checked; ++a)
    for (std::size_t b = a; b < checked; ++b) {
      const Eigen::MatrixXcd ac = ops[a] * ops[b] + ops[b] * ops[a];
      const Eigen::MatrixXcd want = a == b ? Eigen::MatrixXcd(id) : Eigen::MatrixXcd::Zero(dim, dim);
      if ((ac - want).cwiseAbs().maxCoeff() > 1e-15) throw SolverError("Clifford relation violated");
    }
  return ops;
}

struct Coupling {
  std::array<std::uint8_t, 4> index;  // 0-based, increasing
  double value;
};

/// Independent Gaussians J_{abcd}, a < b < c < d, variance 6 J^2 / n^3, in
/// lexicographic order of the index tuple.
inline std::vector<Coupling> sample_couplings(const SykConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::uint8_t>(cfg.n_majorana);
  const double nn = static_cast<double>(cfg.n_majorana);
  std::normal_distribution<double> gauss(0.0, std::sqrt(6.0 * cfg.coupling * cfg.coupling / (nn * nn * nn)));
  auto eng = make_engine(cfg.seed);
  std::vector<Coupling> out;
  for (std::uint8_t a = 0; a < n; ++a)
    for (std::uint8_t b = a + 1; b < n; ++b)
      for (std::uint8_t c = b + 1; c < n; ++c)
        for (std::uint8_t d = c + 1; d < n; ++d) out.push_back({{a, b, c, d}, gauss(eng)});
  return out;
}

/// Dense Hamiltonian sum J chi_a chi_b chi_c chi_d from explicit matrices,
/// symmetrized as (H + H^dagger)/2.
inline Eigen::MatrixXcd build_hamiltonian(const std::vector<Eigen::MatrixXcd>& ops,
                                          const std::vector<Coupling>& couplings) {
  if (ops.empty()) throw ArgumentError("no Majorana operators");
  const auto dim = ops[0].rows();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& c : couplings) {
    for (auto i : c.index)
      if (i >= ops.size()) throw ArgumentError("coupling index beyond the Majorana set");
    h.noalias() += c.value * (ops[c.index[0]] * ops[c.index[1]] * ops[c.index[2]] * ops[c.index[3]]);
  }
  return 0.5 * (h + h.adjoint());
}

/// P = 2^{n/2} chi_1 ... chi_n, which equals i^{n/2} Z x ... x Z.
inline Eigen::MatrixXcd parity_operator(std::size_t n_majorana) {
  const std::size_t q = n_majorana / 2;
  PauliString p;
  for (std::size_t k = 0; k < n_majorana; ++k) p = p * majorana_string(k, q);
  p.phase *= std::pow(2.0, static_cast<double>(q));
  return to_matrix(p, q);
}

/// Basis states of even popcount, i.e. the +1 eigenspace of Z x ... x Z.
inline std::vector<std::uint64_t> even_parity_states(std::size_t qubits) {
  std::vector<std::uint64_t> states;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << qubits); ++s)
    if (std::popcount(s) % 2 == 0) states.push_back(s);
  return states;
}

/// Hamiltonian restricted to the even-parity block, assembled directly from
/// Pauli strings (every term flips an even number of qubits, so the block is
/// invariant).
inline Eigen::MatrixXcd even_block_hamiltonian(const SykConfig& cfg, const std::vector<Coupling>& couplings) {
  cfg.validate();
  const std::size_t q = cfg.qubits();
  const auto states = even_parity_states(q);
  std::vector<std::uint32_t> slot(cfg.dimension(), 0);
  for (std::size_t k = 0; k < states.size(); ++k) slot[states[k]] = static_cast<std::uint32_t>(k);
  std::vector<PauliString> chi(cfg.n_majorana);
  for (std::size_t k = 0; k < chi.size(); ++k) chi[k] = majorana_string(k, q);

  const auto dim = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& c : couplings) {
    const PauliString p = chi[c.index[0]] * chi[c.index[1]] * chi[c.index[2]] * chi[c.index[3]];
    const cplx w = c.value * p.phase;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const std::uint64_t s = states[k];
      const double sign = std::popcount(p.z & s) % 2 ? -1.0 : 1.0;
      h(static_cast<Eigen::Index>(slot[s ^ p.x]), static_cast<Eigen::Index>(k)) += sign * w;
    }
  }
  return 0.5 * (h + h.adjoint());
}

struct SykSpectrum {
  LineSpectrum levels;         // raw, strictly increasing
  std::size_t block_dimension = 0;
  bool kramers = false;        // doublets were collapsed
  std::vector<std::string> warnings;
};

/// Even-block eigenvalues; for n mod 8 = 4 the exact Kramers doublets are
/// checked (to 1e-10 of the spectral width) and collapsed to single levels.
inline SykSpectrum syk_spectrum_from(const SykConfig& cfg, const std::vector<Coupling>& couplings) {
  const auto h = even_block_hamiltonian(cfg, couplings);
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(h);
  std::vector<double> e(ev.data(), ev.data() + ev.size());
  SykSpectrum out;
  out.block_dimension = e.size();
  const double width = e.back() - e.front();
  const double tol = 1e-10 * width;
  if (cfg.n_majorana % 8 == 4) {
    out.kramers = true;
    std::vector<double> single;
    single.reserve(e.size() / 2);
    for (std::size_t k = 0; k + 1 < e.size(); k += 2) {
      if (std::fabs(e[k + 1] - e[k]) > tol)
        throw SolverError("Kramers pairing broken at level " + std::to_string(k) + " (gap " +
                          std::to_string(e[k + 1] - e[k]) + ")");
      single.push_back(0.5 * (e[k] + e[k + 1]));
    }
    e = std::move(single);
  }
  for (std::size_t k = 1; k < e.size(); ++k)
    if (e[k] - e[k - 1] < tol)
      out.warnings.push_back("near-degenerate levels at index " + std::to_string(k - 1));
  // Exact ties cannot be represented as a line spectrum; they are made distinct
  // by one ulp and reported above.
  for (std::size_t k = 1; k < e.size(); ++k)
    if (!(e[k] > e[k - 1])) e[k] = std::nextafter(e[k - 1], INFINITY);
  out.levels = LineSpectrum(std::move(e), Scale::raw);
  return out;
}

/// Samples couplings from cfg.seed and diagonalizes; a failed solve is
/// retried with derived seeds before SamplerFailure is thrown.
inline SykSpectrum syk_spectrum(const SykConfig& cfg) {
  cfg.validate();
  constexpr int attempts = 4;
  std::string last;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    SykConfig c = cfg;
    if (attempt) c.seed = derive_seed(cfg.seed, 0x5e6ULL + static_cast<std::uint64_t>(attempt));
    try {
      return syk_spectrum_from(c, sample_couplings(c));
    } catch (const SolverError& e) {
      last = e.what();
    }
  }
  throw SamplerFailure(last, cfg.seed);
}

/// Dyson index of the even block: 1 for n mod 8 = 0, 4 for n mod 8 = 4, else 2.
inline int syk_beta(std::size_t n_majorana) {
  switch (n_majorana % 8) {
    case 0: return 1;
    case 4: return 4;
    default: return 2;
  }
}

}  // namespace lls
