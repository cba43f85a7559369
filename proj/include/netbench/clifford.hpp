#pragma once

#include "netbench/linalg.hpp"
#include "netbench/rng.hpp"

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace netbench {

// Group element with canonical global phase: the first entry of magnitude
// > 0.25 (row-major scan) is made real positive.  Index is stable across runs
// for a given generation order.
struct CliffordElement {
  std::size_t index = 0;
  CMatrix unitary;
};

// Random gate set for the benchmarking protocols: the full n-qubit Clifford
// group (n <= 2), generated by breadth-first closure from {H, S} plus CNOT,
// deduplicated up to global phase.  Matrix-keyed lookup (entries rounded to a
// 1e-9 grid after phase canonicalization) gives exact inverse computation.
class CliffordGroup {
 public:
  static CliffordGroup generate(int n_qubits);
  // Builds a group from an explicit list of unitaries (identity first);
  // closure up to phase is verified.
  static CliffordGroup from_unitaries(const std::vector<CMatrix>& unitaries);

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const CliffordElement& element(std::size_t i) const { return elements_.at(i); }
  const CliffordElement& identity_element() const { return elements_.front(); }

  std::optional<std::size_t> find(const CMatrix& unitary) const;
  // Index of U_i * U_j; throws on a lookup miss (closure corruption).
  std::size_t product_index(std::size_t i, std::size_t j) const;
  std::size_t inverse_index(std::size_t i) const;

  const CliffordElement& sample(Rng& rng) const;

  // Group element equal (up to phase) to the inverse of the ordered product
  // of `sequence` (application order: sequence[0] first).
  const CliffordElement& invert_sequence(std::span<const std::size_t> sequence) const;

  // (1/|G|^2) sum_{U,V} |tr(U^dag V)|^4; equals 2 for a unitary 2-design.
  double frame_potential_2() const;
  double frame_potential_2_sampled(std::size_t pairs, Rng& rng) const;

  static void canonicalize_phase(CMatrix& u);

 private:
  CliffordGroup() = default;
  void index_elements();
  static std::string hash_key(const CMatrix& canonical);

  int n_qubits_ = 0;
  Index dim_ = 0;
  std::vector<CliffordElement> elements_;
  std::vector<std::size_t> inverse_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

}  // namespace netbench
