#include "netbench/channel.hpp"

#include "netbench/clifford.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace netbench {

namespace {

CMatrix kraus_to_superop(const std::vector<CMatrix>& kraus, Index d) {
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& k : kraus) {
    s += kron(k.conjugate(), k);
  }
  return s;
}

CMatrix kraus_to_choi(const std::vector<CMatrix>& kraus, Index d) {
  CMatrix c = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& k : kraus) {
    CVector v = vec(k);
    c += v * v.adjoint();
  }
  return c;
}

}  // namespace

QuantumChannel::QuantumChannel(Index dim, std::vector<CMatrix> kraus, CMatrix superop)
    : dim_(dim), kraus_(std::move(kraus)), superop_(std::move(superop)) {}

QuantumChannel QuantumChannel::from_kraus(std::vector<CMatrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: empty operator list");
  const Index d = kraus.front().rows();
  for (const CMatrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("from_kraus: inconsistent operator shapes");
    }
  }
  CMatrix s = kraus_to_superop(kraus, d);
  return QuantumChannel(d, std::move(kraus), std::move(s));
}

QuantumChannel QuantumChannel::from_superop(CMatrix superop) {
  const Index d2 = superop.rows();
  if (d2 == 0 || superop.cols() != d2) throw std::invalid_argument("from_superop: not square");
  const Index d = isqrt_exact(d2);
  if (d < 0) throw std::invalid_argument("from_superop: dimension is not a perfect square");
  std::vector<CMatrix> kraus = choi_to_kraus(reshuffle_choi_superop(superop, d), d);
  return QuantumChannel(d, std::move(kraus), std::move(superop));
}

QuantumChannel QuantumChannel::from_map(Index dim,
                                        const std::function<CMatrix(const CMatrix&)>& map) {
  CMatrix choi = CMatrix::Zero(dim * dim, dim * dim);
  for (Index a = 0; a < dim; ++a) {
    for (Index b = 0; b < dim; ++b) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(a, b) = 1.0;
      choi.block(a * dim, b * dim, dim, dim) = map(unit);
    }
  }
  std::vector<CMatrix> kraus = choi_to_kraus(choi, dim);
  CMatrix s = kraus_to_superop(kraus, dim);
  return QuantumChannel(dim, std::move(kraus), std::move(s));
}

QuantumChannel QuantumChannel::identity(Index dim) {
  return unitary(CMatrix::Identity(dim, dim));
}

QuantumChannel QuantumChannel::unitary(const CMatrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw std::invalid_argument("unitary: not square");
  return from_kraus({u});
}

CMatrix QuantumChannel::choi() const { return kraus_to_choi(kraus_, dim_); }

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != dim_) throw std::invalid_argument("apply: dimension mismatch");
  return DensityMatrix(dim_, apply_matrix(rho.matrix()));
}

CMatrix QuantumChannel::apply_matrix(const CMatrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) {
    throw std::invalid_argument("apply_matrix: dimension mismatch");
  }
  return unvec(superop_ * vec(m), dim_, dim_);
}

CMatrix QuantumChannel::adjoint_apply(const CMatrix& effect) const {
  if (effect.rows() != dim_ || effect.cols() != dim_) {
    throw std::invalid_argument("adjoint_apply: dimension mismatch");
  }
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (const CMatrix& k : kraus_) {
    out += k.adjoint() * effect * k;
  }
  return out;
}

void QuantumChannel::validate(const ChannelTolerances& tol) const {
  CMatrix completeness = CMatrix::Zero(dim_, dim_);
  for (const CMatrix& k : kraus_) {
    completeness += k.adjoint() * k;
  }
  if (max_abs(completeness - CMatrix::Identity(dim_, dim_)) > tol.completeness) {
    throw std::runtime_error("QuantumChannel: trace preservation violated");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(choi()), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol.choi_psd_floor) {
    throw std::runtime_error("QuantumChannel: Choi matrix not PSD within tolerance");
  }
  if (max_abs(superop_ - kraus_to_superop(kraus_, dim_)) > tol.superop_consistency) {
    throw std::runtime_error("QuantumChannel: cached superoperator inconsistent with Kraus form");
  }
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.dim() != first.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return QuantumChannel::from_superop(second.superop() * first.superop());
}

QuantumChannel depolarizing_channel(Index dim, double f) {
  if (dim < 2) throw std::invalid_argument("depolarizing_channel: dim must be >= 2");
  const double d = static_cast<double>(dim);
  const double lo = -1.0 / (d * d - 1.0);
  if (f < lo - 1e-12 || f > 1.0 + 1e-12) {
    throw std::invalid_argument("depolarizing_channel: fidelity outside CPTP range");
  }
  const CVector omega = maximally_entangled_ket(dim) * std::sqrt(d);  // unnormalized sum |ii>
  CMatrix choi = f * (omega * omega.adjoint());
  choi += ((1.0 - f) / d) * CMatrix::Identity(dim * dim, dim * dim);
  std::vector<CMatrix> kraus = choi_to_kraus(choi, dim);
  return QuantumChannel::from_kraus(std::move(kraus));
}

QuantumChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("amplitude_damping: gamma in [0,1]");
  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  CMatrix k1 = CMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel::from_kraus({k0, k1});
}

QuantumChannel dephasing_channel(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("dephasing: p in [0,1]");
  CMatrix k0 = std::sqrt(1.0 - p) * CMatrix::Identity(2, 2);
  CMatrix k1 = std::sqrt(p) * pauli_z();
  return QuantumChannel::from_kraus({k0, k1});
}

QuantumChannel decoherence_channel(Duration t, Duration t1, Duration t2) {
  if (!(t2 <= t1.scaled(2))) {
    throw std::invalid_argument("decoherence_channel: requires T2 <= 2*T1");
  }
  if (t.count_ns() < 0) throw std::invalid_argument("decoherence_channel: negative time");
  const double gamma = 1.0 - std::exp(-decay_ratio(t, t1));
  // Residual dephasing after amplitude damping already shrinks off-diagonals
  // by exp(-t/(2 T1)).
  const double target = std::exp(-decay_ratio(t, t2));
  const double from_damping = std::exp(-0.5 * decay_ratio(t, t1));
  double residual = from_damping > 0.0 ? target / from_damping : 1.0;
  if (residual > 1.0) residual = 1.0;
  const double p = 0.5 * (1.0 - residual);
  return compose(dephasing_channel(p), amplitude_damping_channel(gamma));
}

double entanglement_fidelity(const QuantumChannel& channel) {
  const double d = static_cast<double>(channel.dim());
  double sum = 0.0;
  for (const CMatrix& k : channel.kraus_ops()) {
    sum += std::norm(k.trace());
  }
  return sum / (d * d);
}

double average_fidelity(const QuantumChannel& channel) {
  const double d = static_cast<double>(channel.dim());
  return (d * entanglement_fidelity(channel) + 1.0) / (d + 1.0);
}

double depolarizing_fidelity(const QuantumChannel& channel) {
  const double d = static_cast<double>(channel.dim());
  return (d * average_fidelity(channel) - 1.0) / (d - 1.0);
}

QuantumChannel twirl(const QuantumChannel& channel, const CliffordGroup& group) {
  if (group.dim() != channel.dim()) throw std::invalid_argument("twirl: dimension mismatch");
  const Index d = channel.dim();
  CMatrix acc = CMatrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < group.size(); ++i) {
    const CMatrix& g = group.element(i).unitary;
    const CMatrix gd = g.adjoint();
    acc += kron(gd.conjugate(), gd) * channel.superop() * kron(g.conjugate(), g);
  }
  acc /= static_cast<double>(group.size());
  return QuantumChannel::from_superop(std::move(acc));
}

double singlet_fraction(const DensityMatrix& state) {
  const Index local = isqrt_exact(state.dim());
  if (local < 2) throw std::invalid_argument("singlet_fraction: dimension is not a perfect square");
  const CVector phi = maximally_entangled_ket(local);
  return (phi.adjoint() * state.matrix() * phi)(0, 0).real();
}

QuantumChannel teleportation_channel(const DensityMatrix& resource) {
  const Index local = isqrt_exact(resource.dim());
  if (local < 2) {
    throw std::invalid_argument("teleportation_channel: resource dimension is not a perfect square");
  }
  if (local != 2) {
    throw std::invalid_argument("teleportation_channel: only qubit resources supported");
  }
  const CMatrix id2 = identity_matrix(2);
  const CVector phi = maximally_entangled_ket(2);

  // Bell projections on (input, A) and matching corrections on B.
  std::vector<CMatrix> measurements;
  std::vector<CMatrix> corrections;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x) {
      // |beta_zx> = (Z^z X^x (x) 1) |Phi>; the outcome leaves X^x Z^z |psi>
      // at B, so the correction is the adjoint of that.
      CMatrix zx = id2;
      if (x == 1) zx = pauli_x() * zx;
      if (z == 1) zx = pauli_z() * zx;
      const CVector beta = kron(zx, id2) * phi;
      measurements.push_back(kron(beta.adjoint(), id2));  // 2 x 8
      CMatrix applied = id2;
      if (z == 1) applied = pauli_z() * applied;
      if (x == 1) applied = pauli_x() * applied;
      corrections.push_back(applied.adjoint());
    }
  }

  const CMatrix& res = resource.matrix();
  auto map = [&](const CMatrix& input) {
    CMatrix joint = kron(input, res);
    CMatrix out = CMatrix::Zero(2, 2);
    for (std::size_t k = 0; k < measurements.size(); ++k) {
      CMatrix branch = measurements[k] * joint * measurements[k].adjoint();
      out += corrections[k] * branch * corrections[k].adjoint();
    }
    return out;
  };
  return QuantumChannel::from_map(2, map);
}

CMatrix reshuffle_choi_superop(const CMatrix& m, Index dim) {
  if (m.rows() != dim * dim || m.cols() != dim * dim) {
    throw std::invalid_argument("reshuffle: shape mismatch");
  }
  CMatrix out(dim * dim, dim * dim);
  for (Index a = 0; a < dim; ++a) {
    for (Index b = 0; b < dim; ++b) {
      for (Index c = 0; c < dim; ++c) {
        for (Index e = 0; e < dim; ++e) {
          out(a * dim + b, c * dim + e) = m(e * dim + b, c * dim + a);
        }
      }
    }
  }
  return out;
}

std::vector<CMatrix> choi_to_kraus(const CMatrix& choi, Index dim, double eigenvalue_cutoff) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(choi));
  std::vector<CMatrix> kraus;
  for (Index i = solver.eigenvalues().size() - 1; i >= 0; --i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda <= eigenvalue_cutoff) continue;
    kraus.push_back(std::sqrt(lambda) * unvec(solver.eigenvectors().col(i), dim, dim));
  }
  if (kraus.empty()) {
    throw std::runtime_error("choi_to_kraus: no positive spectrum (zero map?)");
  }
  return kraus;
}

}  // namespace netbench
