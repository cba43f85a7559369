#include "netbench/density_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace netbench {

DensityMatrix::DensityMatrix(Index dim, CMatrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
  if (dim_ <= 0 || matrix_.rows() != dim_ || matrix_.cols() != dim_) {
    throw std::invalid_argument("DensityMatrix: matrix shape does not match dim");
  }
}

DensityMatrix DensityMatrix::pure(const CVector& ket) {
  const double norm = ket.norm();
  if (norm == 0.0) throw std::invalid_argument("DensityMatrix::pure: zero ket");
  CVector k = ket / norm;
  return DensityMatrix(ket.size(), k * k.adjoint());
}

DensityMatrix DensityMatrix::computational(Index dim, Index basis_index) {
  if (basis_index < 0 || basis_index >= dim) {
    throw std::invalid_argument("DensityMatrix::computational: index out of range");
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  m(basis_index, basis_index) = 1.0;
  return DensityMatrix(dim, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(dim, CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

void DensityMatrix::validate(const StateTolerances& tol) const {
  if (!approx_hermitian(matrix_, tol.hermiticity)) {
    throw std::runtime_error("DensityMatrix: not Hermitian within tolerance");
  }
  if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > tol.trace) {
    throw std::runtime_error("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(matrix_), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol.eigenvalue_floor) {
    throw std::runtime_error("DensityMatrix: negative eigenvalue beyond tolerance");
  }
}

Effect::Effect(Index dim, CMatrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
  if (dim_ <= 0 || matrix_.rows() != dim_ || matrix_.cols() != dim_) {
    throw std::invalid_argument("Effect: matrix shape does not match dim");
  }
}

Effect Effect::projector(const CVector& ket) {
  const double norm = ket.norm();
  if (norm == 0.0) throw std::invalid_argument("Effect::projector: zero ket");
  CVector k = ket / norm;
  return Effect(ket.size(), k * k.adjoint());
}

Effect Effect::computational(Index dim, Index basis_index) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(basis_index, basis_index) = 1.0;
  return Effect(dim, std::move(m));
}

void Effect::validate(double tol) const {
  if (!approx_hermitian(matrix_, 1e-12)) {
    throw std::runtime_error("Effect: not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(matrix_), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol || solver.eigenvalues().maxCoeff() > 1.0 + tol) {
    throw std::runtime_error("Effect: spectrum outside [0, 1]");
  }
}

}  // namespace netbench
