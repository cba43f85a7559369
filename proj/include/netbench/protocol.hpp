#pragma once

#include "netbench/network.hpp"
#include "netbench/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace netbench {

enum class ShotModel { exact, gaussian, binomial };

ShotModel parse_shot_model(const std::string& name);
std::string to_string(ShotModel model);

// One random-gate layout for a run of m bounces along a K-node path:
// 2*m*(K-1) gate indices in application order, plus the ending-gate coin.
struct SequenceSpec {
  int m = 0;
  std::vector<std::size_t> gate_indices;
  bool flip_chosen = false;
  std::uint64_t seed = 0;
};

SequenceSpec make_sequence_spec(const CliffordGroup& group, int m, int path_length,
                                std::uint64_t seed);

// Exact branch expectations of one sequence: p_plus measures after the plain
// inverse ending gate, p_minus after flip * inverse.
struct SequenceOutcome {
  double p_plus = 0.0;
  double p_minus = 0.0;
  // Coin-averaged signed expectation (1/2)(p_plus - p_minus).
  double signed_mean() const { return 0.5 * (p_plus - p_minus); }
};

SequenceOutcome run_sequence_path(const Network& network, const std::vector<std::string>& path,
                                  const SequenceSpec& spec);
SequenceOutcome run_sequence_2node(const Network& network, const std::string& node_a,
                                   const std::string& node_b, const SequenceSpec& spec);

// Shot-noise model on a signed expectation value: exact returns the input,
// gaussian adds N(0, p(1-p)/shots) to the magnitude, binomial draws counts.
double apply_shot_noise(double p_signed, int shots, ShotModel model, Rng& rng);

struct DecayRecord {
  int m = 0;
  int sequence_index = 0;
  std::uint64_t seed = 0;
  double b_value = 0.0;
  // Exact branch expectations (available for simulated datasets).
  double p_plus = 0.0;
  double p_minus = 0.0;
  bool flip_chosen = false;
};

struct DecayDataset {
  std::vector<int> m_values;
  std::vector<DecayRecord> records;  // ordered by (m, sequence_index)
  int sequences_per_m = 0;
  int shots = 0;
  ShotModel shot_model = ShotModel::exact;
  std::uint64_t master_seed = 0;
  bool has_branch_expectations = false;

  std::vector<double> values_at(int m) const;
  double mean_at(int m) const;
  std::vector<double> means() const;
  void validate() const;
};

struct ProtocolParams {
  std::vector<int> m_values;
  int sequences_per_m = 40;
  int shots = 4000;
  ShotModel shot_model = ShotModel::gaussian;
  std::uint64_t master_seed = 1;
  int jobs = 1;
};

// Algorithm executors.  Every sequence is keyed by (m, n) and fully
// reproducible from the master seed, so the job count never changes results.
DecayDataset run_protocol_2node(const Network& network, const std::string& node_a,
                                const std::string& node_b, const ProtocolParams& params);
DecayDataset run_protocol_multinode(const Network& network, const std::vector<std::string>& path,
                                    const ProtocolParams& params);

void write_decay_csv(const DecayDataset& dataset, std::ostream& out);
void write_decay_csv_file(const DecayDataset& dataset, const std::string& path);
std::string sidecar_json(const DecayDataset& dataset, const std::string& config_hash);
DecayDataset load_decay_csv(std::istream& in);

}  // namespace netbench
