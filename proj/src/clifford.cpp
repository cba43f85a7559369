#include "netbench/clifford.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <stdexcept>

namespace netbench {

namespace {

// Nonzero entries of n<=2 Clifford unitaries have magnitude >= 1/2, so this
// threshold cleanly separates zeros from signal.
constexpr double kEntryThreshold = 0.25;
constexpr double kGrid = 1e9;  // hash grid: entries rounded to 1e-9

std::vector<CMatrix> generators(int n_qubits) {
  if (n_qubits == 1) {
    return {hadamard(), phase_s()};
  }
  const CMatrix id2 = identity_matrix(2);
  return {kron(hadamard(), id2), kron(id2, hadamard()), kron(phase_s(), id2),
          kron(id2, phase_s()), cnot()};
}

}  // namespace

void CliffordGroup::canonicalize_phase(CMatrix& u) {
  for (Index i = 0; i < u.rows(); ++i) {
    for (Index j = 0; j < u.cols(); ++j) {
      const Complex e = u(i, j);
      if (std::abs(e) > kEntryThreshold) {
        u *= std::conj(e) / std::abs(e);
        return;
      }
    }
  }
  throw std::runtime_error("canonicalize_phase: no significant entry found");
}

std::string CliffordGroup::hash_key(const CMatrix& canonical) {
  std::string key;
  key.resize(static_cast<std::size_t>(canonical.size()) * 2 * sizeof(std::int64_t));
  char* out = key.data();
  for (Index j = 0; j < canonical.cols(); ++j) {
    for (Index i = 0; i < canonical.rows(); ++i) {
      const std::int64_t re = std::llround(canonical(i, j).real() * kGrid);
      const std::int64_t im = std::llround(canonical(i, j).imag() * kGrid);
      std::memcpy(out, &re, sizeof(re));
      out += sizeof(re);
      std::memcpy(out, &im, sizeof(im));
      out += sizeof(im);
    }
  }
  return key;
}

CliffordGroup CliffordGroup::generate(int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw std::invalid_argument("CliffordGroup::generate: n_qubits must be 1 or 2");
  }
  CliffordGroup group;
  group.n_qubits_ = n_qubits;
  group.dim_ = Index(1) << n_qubits;

  const std::vector<CMatrix> gens = generators(n_qubits);
  CMatrix id = identity_matrix(group.dim_);
  canonicalize_phase(id);
  group.elements_.push_back({0, id});
  group.lookup_.emplace(hash_key(id), 0);

  // Breadth-first closure; discovery order fixes the element indices.
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    for (const CMatrix& g : gens) {
      CMatrix next = g * group.elements_[cur].unitary;
      canonicalize_phase(next);
      std::string key = hash_key(next);
      if (group.lookup_.find(key) == group.lookup_.end()) {
        const std::size_t idx = group.elements_.size();
        group.elements_.push_back({idx, std::move(next)});
        group.lookup_.emplace(std::move(key), idx);
        frontier.push_back(idx);
      }
    }
  }
  group.index_elements();
  return group;
}

CliffordGroup CliffordGroup::from_unitaries(const std::vector<CMatrix>& unitaries) {
  if (unitaries.empty()) throw std::invalid_argument("from_unitaries: empty list");
  CliffordGroup group;
  group.dim_ = unitaries.front().rows();
  group.n_qubits_ = 0;
  for (Index d = group.dim_; d > 1; d /= 2) group.n_qubits_ += 1;
  for (const CMatrix& u : unitaries) {
    CMatrix c = u;
    canonicalize_phase(c);
    std::string key = hash_key(c);
    if (group.lookup_.count(key)) throw std::invalid_argument("from_unitaries: duplicate element");
    const std::size_t idx = group.elements_.size();
    group.elements_.push_back({idx, std::move(c)});
    group.lookup_.emplace(std::move(key), idx);
  }
  if (max_abs(group.elements_.front().unitary - identity_matrix(group.dim_)) > 1e-9) {
    throw std::invalid_argument("from_unitaries: identity must come first");
  }
  // Closure up to phase.
  for (const auto& a : group.elements_) {
    for (const auto& b : group.elements_) {
      if (!group.find(a.unitary * b.unitary)) {
        throw std::invalid_argument("from_unitaries: set is not closed under multiplication");
      }
    }
  }
  group.index_elements();
  return group;
}

void CliffordGroup::index_elements() {
  inverse_.resize(elements_.size());
  for (const auto& el : elements_) {
    const auto inv = find(el.unitary.adjoint());
    if (!inv) throw std::runtime_error("CliffordGroup: inverse missing from closure");
    inverse_[el.index] = *inv;
  }
}

std::optional<std::size_t> CliffordGroup::find(const CMatrix& unitary) const {
  CMatrix c = unitary;
  canonicalize_phase(c);
  const auto it = lookup_.find(hash_key(c));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t CliffordGroup::product_index(std::size_t i, std::size_t j) const {
  const auto idx = find(elements_.at(i).unitary * elements_.at(j).unitary);
  if (!idx) throw std::runtime_error("CliffordGroup: product lookup miss (closure corruption)");
  return *idx;
}

std::size_t CliffordGroup::inverse_index(std::size_t i) const { return inverse_.at(i); }

const CliffordElement& CliffordGroup::sample(Rng& rng) const {
  if (elements_.empty()) throw std::runtime_error("CliffordGroup: empty group");
  return elements_[uniform_index(rng, elements_.size())];
}

const CliffordElement& CliffordGroup::invert_sequence(std::span<const std::size_t> sequence) const {
  if (sequence.empty()) throw std::invalid_argument("invert_sequence: empty sequence");
  std::size_t total = sequence.front();
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    total = product_index(sequence[i], total);  // later gates left-multiply
  }
  return elements_[inverse_index(total)];
}

double CliffordGroup::frame_potential_2() const {
  double sum = 0.0;
  for (const auto& a : elements_) {
    for (const auto& b : elements_) {
      const Complex t = (a.unitary.adjoint() * b.unitary).trace();
      const double t2 = std::norm(t);
      sum += t2 * t2;
    }
  }
  const double n = static_cast<double>(elements_.size());
  return sum / (n * n);
}

double CliffordGroup::frame_potential_2_sampled(std::size_t pairs, Rng& rng) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const CMatrix& a = elements_[uniform_index(rng, elements_.size())].unitary;
    const CMatrix& b = elements_[uniform_index(rng, elements_.size())].unitary;
    const double t2 = std::norm((a.adjoint() * b).trace());
    sum += t2 * t2;
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace netbench
