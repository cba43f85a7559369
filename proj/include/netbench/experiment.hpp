#pragma once

#include "netbench/estimate.hpp"
#include "netbench/network.hpp"
#include "netbench/protocol.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace netbench {

struct NoiseSpec {
  std::string type = "identity";  // identity | depolarizing | amplitude_damping | dephasing | kraus
  double f = 1.0;
  double gamma = 0.0;
  double p = 0.0;
  std::vector<CMatrix> kraus;
};

struct NodeSpec {
  std::string name;
  Index dim = 2;
  NoiseSpec sp_noise;
  NoiseSpec meas_noise;
  NoiseSpec gate_noise;
  Duration gate_duration = Duration::zero();
  Duration t1 = Duration::infinite();
  Duration t2 = Duration::infinite();
};

struct LinkSpec {
  std::string from;
  std::string to;
  std::string channel_type = "depolarizing";  // depolarizing | teleportation | kraus | identity
  double f = 1.0;
  double alpha = 1.0;  // bright-state population of the teleportation resource
  std::vector<CMatrix> kraus;
  Duration transmit_duration = Duration::zero();
  bool decohere_in_transit = false;
};

struct ProtocolSpec {
  std::vector<std::string> path;
  std::vector<int> m_values;
  int sequences_per_m = 40;
  int shots = 4000;
  ShotModel shot_model = ShotModel::gaussian;
  std::uint64_t master_seed = 20260809;
};

struct ExperimentConfig {
  std::string name = "custom";
  int gate_set_qubits = 1;
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  ProtocolSpec protocol;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  // FNV-1a over the canonical serialization; embedded in every output file.
  std::string hash() const;
};

// alpha |Phi><Phi| + (1 - alpha) |00><00|, the heralded-entanglement model.
DensityMatrix bright_state_resource(double alpha);

ExperimentConfig preset_noiseless();
ExperimentConfig preset_depol_081();
ExperimentConfig preset_tele_ideal();
ExperimentConfig preset_paper_2node();
ExperimentConfig preset_paper_multinode(int k_nodes);
ExperimentConfig make_preset(const std::string& name);

Network build_network(const ExperimentConfig& config,
                      std::shared_ptr<const CliffordGroup> gate_set = nullptr);

struct RunResult {
  ExperimentConfig config;
  DecayDataset dataset;
  FitResult fit;
  SymmetricLinkFidelity link;
  std::string config_hash;
};

RunResult run_experiment(const ExperimentConfig& config, int jobs = 1,
                         int bootstrap_resamples = 1000);
// Writes decay.csv, fit.json and summary.txt under out_dir.
void write_run_outputs(const RunResult& result, const std::string& out_dir);

struct SweepEntry {
  int k = 0;
  FitResult fit;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  double log_f_slope = 0.0;
  double log_f_r_squared = 0.0;
  std::string config_hash;
  std::uint64_t master_seed = 0;
};

// Runs the multi-node protocol on homogeneous chains of k_min..k_max nodes
// derived from the config's first node/link as templates.
SweepResult run_multinode_sweep(const ExperimentConfig& config, int k_min, int k_max,
                                int jobs = 1, int bootstrap_resamples = 1000);
void write_sweep_outputs(const SweepResult& result, const std::string& out_dir);

void write_plan_outputs(const StatReport& report, double f_guess, double amplitude_guess,
                        const std::string& out_dir);

}  // namespace netbench
