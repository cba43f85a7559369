#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <stdexcept>

namespace netbench {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

// Column-stacking vectorization: vec(M)[j*rows + i] = M(i, j).
inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

inline CMatrix identity_matrix(Index d) { return CMatrix::Identity(d, d); }

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline CMatrix hadamard() {
  CMatrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

inline CMatrix phase_s() {
  CMatrix m(2, 2);
  m << 1, 0, 0, Complex(0, 1);
  return m;
}

// Control on the first (most significant) qubit.
inline CMatrix cnot() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

// (1/sqrt(d)) * sum_i |ii>, composite index i*d + i.
inline CVector maximally_entangled_ket(Index d) {
  CVector phi = CVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) {
    phi(i * d + i) = amp;
  }
  return phi;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool approx_hermitian(const CMatrix& m, double tol) {
  return max_abs(m - m.adjoint()) <= tol;
}

inline CMatrix hermitian_part(const CMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

// Perfect integer square root for bipartite dimension checks; -1 if not square.
inline Index isqrt_exact(Index n) {
  if (n < 0) return -1;
  Index r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  for (Index c = r - 1; c <= r + 1; ++c) {
    if (c >= 0 && c * c == n) return c;
  }
  return -1;
}

}  // namespace netbench
