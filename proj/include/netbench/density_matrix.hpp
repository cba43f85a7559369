#pragma once

#include "netbench/linalg.hpp"

#include <stdexcept>

namespace netbench {

struct StateTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double eigenvalue_floor = 1e-10;
};

/// d x d Hermitian, PSD, unit-trace state of a register.
class DensityMatrix {
 public:
  DensityMatrix(Index dim, CMatrix matrix);

  static DensityMatrix pure(const CVector& ket);
  static DensityMatrix computational(Index dim, Index basis_index);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

  double trace_real() const { return matrix_.trace().real(); }

  void validate(const StateTolerances& tol = {}) const;

 private:
  Index dim_;
  CMatrix matrix_;
};

/// POVM element: Hermitian with spectrum in [0, 1].
class Effect {
 public:
  Effect(Index dim, CMatrix matrix);

  static Effect projector(const CVector& ket);
  static Effect computational(Index dim, Index basis_index);

  Index dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

  void validate(double tol = 1e-10) const;

 private:
  Index dim_;
  CMatrix matrix_;
};

}  // namespace netbench
