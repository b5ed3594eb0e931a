#pragma once

// Dense eigenvalue helpers. General complex matrices go through LAPACK
// (zgeev, eigenvalues only); Hermitian ones through Eigen.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "lls/error.hpp"
#include "lls/spectrum.hpp"

namespace lls::linalg {

/// Eigenvalues of a general complex square matrix.
inline std::vector<std::complex<double>> eigenvalues(Eigen::MatrixXcd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (a.cols() != a.rows()) throw ArgumentError("eigenvalues: matrix is not square");
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
                    reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw SolverError("zgeev failed with info = " + std::to_string(info));
  return w;
}

/// Sorted eigen-phases in [0, 2pi) of a unitary matrix. Throws SolverError when
/// an eigenvalue is off the unit circle by more than `unit_tol`.
inline std::vector<double> unitary_eigenangles(const Eigen::MatrixXcd& u, double unit_tol = 1e-8) {
  const auto w = eigenvalues(u);
  std::vector<double> angles;
  angles.reserve(w.size());
  for (const auto& z : w) {
    if (std::abs(std::abs(z) - 1.0) > unit_tol)
      throw SolverError("eigenvalue off the unit circle: |z| = " + std::to_string(std::abs(z)));
    angles.push_back(CircularSpectrum::wrap_angle(std::arg(z)));
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

/// Ascending eigenvalues of a Hermitian matrix (lower triangle is read).
template <class Matrix>
Eigen::VectorXd hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

}  // namespace lls::linalg
