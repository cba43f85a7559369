#pragma once

#include "netbench/density_matrix.hpp"
#include "netbench/duration.hpp"
#include "netbench/linalg.hpp"

#include <functional>
#include <vector>

namespace netbench {

class CliffordGroup;

struct ChannelTolerances {
  double completeness = 1e-10;       // || sum K^dag K - 1 ||_max
  double choi_psd_floor = 1e-10;     // Choi eigenvalues >= -floor
  double superop_consistency = 1e-12;
};

// CPTP map in dual representation: Kraus operators for construction and
// validation, a cached superoperator (column-stacking convention,
// S = sum conj(K) (x) K) for fast composition and twirling.
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(std::vector<CMatrix> kraus);
  static QuantumChannel from_superop(CMatrix superop);
  // Builds the channel from the action of an arbitrary linear map on the
  // matrix units; Kraus operators are recovered from the Choi spectrum.
  static QuantumChannel from_map(Index dim, const std::function<CMatrix(const CMatrix&)>& map);
  static QuantumChannel identity(Index dim);
  static QuantumChannel unitary(const CMatrix& u);

  Index dim() const { return dim_; }
  const std::vector<CMatrix>& kraus_ops() const { return kraus_; }
  const CMatrix& superop() const { return superop_; }
  CMatrix choi() const;

  DensityMatrix apply(const DensityMatrix& rho) const;
  CMatrix apply_matrix(const CMatrix& m) const;
  // Heisenberg-picture action sum K^dag E K, used for noisy POVM effects.
  CMatrix adjoint_apply(const CMatrix& effect) const;

  void validate(const ChannelTolerances& tol = {}) const;

 private:
  QuantumChannel(Index dim, std::vector<CMatrix> kraus, CMatrix superop);

  Index dim_ = 0;
  std::vector<CMatrix> kraus_;
  CMatrix superop_;
};

// second after first: superop product second * first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

// rho -> f * rho + (1 - f) * tr(rho) 1/d, valid for f in [-1/(d^2-1), 1].
QuantumChannel depolarizing_channel(Index dim, double f);

QuantumChannel amplitude_damping_channel(double gamma);

// Phase flip with probability p: off-diagonal multiplier (1 - 2p).
QuantumChannel dephasing_channel(double p);

// Amplitude damping (gamma = 1 - exp(-t/T1)) followed by pure dephasing such
// that the total off-diagonal decay is exp(-t/T2).  Requires T2 <= 2*T1.
QuantumChannel decoherence_channel(Duration t, Duration t1, Duration t2);

// <Phi| (1 (x) Lambda)(Phi) |Phi| with Phi the maximally entangled state;
// equals sum_k |tr K_k|^2 / d^2.
double entanglement_fidelity(const QuantumChannel& channel);

// Haar-average input-output overlap, computed as (d F_e + 1) / (d + 1).
double average_fidelity(const QuantumChannel& channel);

// f with F = ((d-1) f + 1) / d.
double depolarizing_fidelity(const QuantumChannel& channel);

// (1/|G|) sum_G G^dag Lambda G.  Over a unitary 2-design this projects onto
// the depolarizing channel with the same depolarizing fidelity.
QuantumChannel twirl(const QuantumChannel& channel, const CliffordGroup& group);

// <Phi| rho |Phi> of a bipartite state with equal local dimensions.
double singlet_fraction(const DensityMatrix& state);

// Effective channel of the teleportation circuit with the given two-qubit
// resource and noiseless local operations: Bell measurement on (input, A),
// outcome-conditioned Pauli correction on B, averaged over outcomes.
QuantumChannel teleportation_channel(const DensityMatrix& resource);

// Index reshuffle between the superoperator and Choi representations
// (involution: applying it twice is the identity).
CMatrix reshuffle_choi_superop(const CMatrix& m, Index dim);

std::vector<CMatrix> choi_to_kraus(const CMatrix& choi, Index dim, double eigenvalue_cutoff = 1e-12);

}  // namespace netbench
