#include "netbench/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace netbench {

ShotModel parse_shot_model(const std::string& name) {
  if (name == "exact") return ShotModel::exact;
  if (name == "gaussian") return ShotModel::gaussian;
  if (name == "binomial") return ShotModel::binomial;
  throw std::invalid_argument("unknown shot model: '" + name + "'");
}

std::string to_string(ShotModel model) {
  switch (model) {
    case ShotModel::exact: return "exact";
    case ShotModel::gaussian: return "gaussian";
    case ShotModel::binomial: return "binomial";
  }
  return "exact";
}

SequenceSpec make_sequence_spec(const CliffordGroup& group, int m, int path_length,
                                std::uint64_t seed) {
  if (m < 0) throw std::invalid_argument("make_sequence_spec: negative bounce count");
  if (path_length < 2) throw std::invalid_argument("make_sequence_spec: path needs >= 2 nodes");
  SequenceSpec spec;
  spec.m = m;
  spec.seed = seed;
  Rng rng = make_rng(seed);
  const std::size_t count = static_cast<std::size_t>(2 * m) * (path_length - 1);
  spec.gate_indices.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    spec.gate_indices.push_back(group.sample(rng).index);
  }
  spec.flip_chosen = uniform_bit(rng);
  return spec;
}

SequenceOutcome run_sequence_path(const Network& network, const std::vector<std::string>& path,
                                  const SequenceSpec& spec) {
  const std::size_t k_nodes = path.size();
  if (k_nodes < 2) throw std::invalid_argument("run_sequence_path: path needs >= 2 nodes");
  for (std::size_t k = 0; k + 1 < k_nodes; ++k) {
    if (!network.has_link(path[k], path[k + 1]) || !network.has_link(path[k + 1], path[k])) {
      throw std::invalid_argument("run_sequence_path: path is not linked in both directions");
    }
  }
  const std::size_t expected = static_cast<std::size_t>(2 * spec.m) * (k_nodes - 1);
  if (spec.gate_indices.size() != expected) {
    throw std::invalid_argument("run_sequence_path: gate count does not match 2*m*(K-1)");
  }

  const CliffordGroup& group = network.gate_set();
  const std::string& home = path.front();

  Clock clock;
  DensityMatrix rho = network.prepare(home);
  std::size_t cursor = 0;
  std::size_t total_index = 0;  // identity
  auto play = [&](const std::string& at, const std::string& next) {
    const std::size_t g = spec.gate_indices[cursor++];
    rho = network.apply_gate(at, group.element(g), rho, clock);
    rho = network.transmit(at, next, rho, clock);
    total_index = group.product_index(g, total_index);
  };
  for (int bounce = 0; bounce < spec.m; ++bounce) {
    for (std::size_t k = 0; k + 1 < k_nodes; ++k) play(path[k], path[k + 1]);
    for (std::size_t k = k_nodes - 1; k >= 1; --k) play(path[k], path[k - 1]);
  }

  // Ending gate from the ideal gate product (noise never enters the inverse);
  // both coin branches share the state accumulated so far.
  const std::size_t inverse = group.inverse_index(total_index);
  const std::size_t flipped =
      group.product_index(network.node(home).flip_index, inverse);

  SequenceOutcome outcome;
  {
    Clock branch_clock = clock;
    DensityMatrix ended = network.apply_gate(home, group.element(inverse), rho, branch_clock);
    outcome.p_plus = network.measure_expectation(home, ended);
  }
  {
    Clock branch_clock = clock;
    DensityMatrix ended = network.apply_gate(home, group.element(flipped), rho, branch_clock);
    outcome.p_minus = network.measure_expectation(home, ended);
  }
  return outcome;
}

SequenceOutcome run_sequence_2node(const Network& network, const std::string& node_a,
                                   const std::string& node_b, const SequenceSpec& spec) {
  return run_sequence_path(network, {node_a, node_b}, spec);
}

double apply_shot_noise(double p_signed, int shots, ShotModel model, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("apply_shot_noise: shots must be >= 1");
  if (std::abs(p_signed) > 1.0 + 1e-12) {
    throw std::invalid_argument("apply_shot_noise: |p| must be <= 1");
  }
  if (model == ShotModel::exact) return p_signed;
  const double sign = p_signed < 0.0 ? -1.0 : 1.0;
  const double p = std::min(1.0, std::abs(p_signed));
  double estimate = p;
  if (model == ShotModel::gaussian) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    std::normal_distribution<double> noise(0.0, 1.0);
    estimate = p + sigma * noise(rng);
    estimate = std::min(1.0, std::max(0.0, estimate));
  } else {
    std::binomial_distribution<int> counts(shots, p);
    estimate = static_cast<double>(counts(rng)) / static_cast<double>(shots);
  }
  return sign * estimate;
}

namespace {

// Per-sequence datum.  Exact and gaussian modes derandomize the ending-gate
// coin and record the signed mean (1/2)(p+ - p-), matching how the reference
// experiments compute per-sequence outcomes from tracked density matrices;
// binomial mode runs the protocol literally: one coin per sequence, counted
// shots on the chosen branch, negated when the flip was applied.
double record_value(const SequenceOutcome& outcome, bool flip_chosen, int shots, ShotModel model,
                    Rng& rng) {
  switch (model) {
    case ShotModel::exact:
      return outcome.signed_mean();
    case ShotModel::gaussian: {
      const double plus = apply_shot_noise(outcome.p_plus, shots, model, rng);
      const double minus = apply_shot_noise(outcome.p_minus, shots, model, rng);
      return 0.5 * (plus - minus);
    }
    case ShotModel::binomial: {
      const double signed_p = flip_chosen ? -outcome.p_minus : outcome.p_plus;
      return apply_shot_noise(signed_p, shots, model, rng);
    }
  }
  return 0.0;
}

DecayDataset run_protocol(const Network& network, const std::vector<std::string>& path,
                          const ProtocolParams& params) {
  if (params.m_values.empty()) throw std::invalid_argument("run_protocol: empty m list");
  if (params.sequences_per_m < 1) throw std::invalid_argument("run_protocol: sequences_per_m < 1");

  DecayDataset dataset;
  dataset.m_values = params.m_values;
  dataset.sequences_per_m = params.sequences_per_m;
  dataset.shots = params.shots;
  dataset.shot_model = params.shot_model;
  dataset.master_seed = params.master_seed;
  dataset.has_branch_expectations = true;
  dataset.records.resize(dataset.m_values.size() * static_cast<std::size_t>(params.sequences_per_m));

  const int path_length = static_cast<int>(path.size());
  const CliffordGroup& group = network.gate_set();

  auto run_task = [&](std::size_t task) {
    const std::size_t m_slot = task / params.sequences_per_m;
    const int n = static_cast<int>(task % params.sequences_per_m);
    const int m = dataset.m_values[m_slot];
    const std::uint64_t seed =
        derive_seed(params.master_seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n));
    SequenceSpec spec = make_sequence_spec(group, m, path_length, seed);
    const SequenceOutcome outcome = run_sequence_path(network, path, spec);
    // Noise stream continues after the gate/coin draws of the same seed.
    Rng rng = make_rng(derive_seed(seed, 0x73686f74ULL));
    DecayRecord& rec = dataset.records[task];
    rec.m = m;
    rec.sequence_index = n;
    rec.seed = seed;
    rec.p_plus = outcome.p_plus;
    rec.p_minus = outcome.p_minus;
    rec.flip_chosen = spec.flip_chosen;
    rec.b_value = record_value(outcome, spec.flip_chosen, params.shots, params.shot_model, rng);
  };

  const std::size_t total = dataset.records.size();
  const int jobs = std::max(1, params.jobs);
  if (jobs == 1) {
    for (std::size_t task = 0; task < total; ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t task = next.fetch_add(1);
          if (task >= total) return;
          run_task(task);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }
  dataset.validate();
  return dataset;
}

}  // namespace

DecayDataset run_protocol_2node(const Network& network, const std::string& node_a,
                                const std::string& node_b, const ProtocolParams& params) {
  return run_protocol(network, {node_a, node_b}, params);
}

DecayDataset run_protocol_multinode(const Network& network, const std::vector<std::string>& path,
                                    const ProtocolParams& params) {
  return run_protocol(network, path, params);
}

std::vector<double> DecayDataset::values_at(int m) const {
  std::vector<double> values;
  for (const DecayRecord& rec : records) {
    if (rec.m == m) values.push_back(rec.b_value);
  }
  return values;
}

double DecayDataset::mean_at(int m) const {
  const std::vector<double> values = values_at(m);
  if (values.empty()) throw std::invalid_argument("DecayDataset: no records at requested m");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<double> DecayDataset::means() const {
  std::vector<double> out;
  out.reserve(m_values.size());
  for (int m : m_values) out.push_back(mean_at(m));
  return out;
}

void DecayDataset::validate() const {
  for (const DecayRecord& rec : records) {
    if (std::abs(rec.b_value) > 1.0 + 1e-12) {
      throw std::runtime_error("DecayDataset: per-sequence value outside [-1, 1]");
    }
  }
  for (int m : m_values) {
    if (values_at(m).size() != static_cast<std::size_t>(sequences_per_m)) {
      throw std::runtime_error("DecayDataset: record count mismatch at some m");
    }
  }
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_decay_csv(const DecayDataset& dataset, std::ostream& out) {
  out << "m,sequence_index,seed,b_value\n";
  for (const DecayRecord& rec : dataset.records) {
    out << rec.m << ',' << rec.sequence_index << ',' << rec.seed << ','
        << format_double(rec.b_value) << '\n';
  }
}

void write_decay_csv_file(const DecayDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_decay_csv(dataset, out);
}

std::string sidecar_json(const DecayDataset& dataset, const std::string& config_hash) {
  std::ostringstream out;
  out << "{\n  \"config_hash\": \"" << config_hash << "\",\n  \"m_values\": [";
  for (std::size_t i = 0; i < dataset.m_values.size(); ++i) {
    out << (i ? ", " : "") << dataset.m_values[i];
  }
  out << "],\n  \"sequences_per_m\": " << dataset.sequences_per_m
      << ",\n  \"shots\": " << dataset.shots
      << ",\n  \"shot_model\": \"" << to_string(dataset.shot_model) << "\""
      << ",\n  \"master_seed\": " << dataset.master_seed << "\n}\n";
  return out.str();
}

DecayDataset load_decay_csv(std::istream& in) {
  DecayDataset dataset;
  dataset.has_branch_expectations = false;
  std::string line;
  if (!std::getline(in, line) || line.rfind("m,sequence_index,seed,b_value", 0) != 0) {
    throw std::runtime_error("load_decay_csv: missing header");
  }
  std::vector<int> seen_m;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DecayRecord rec;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    rec.m = std::stoi(field);
    std::getline(row, field, ',');
    rec.sequence_index = std::stoi(field);
    std::getline(row, field, ',');
    rec.seed = std::stoull(field);
    std::getline(row, field, ',');
    rec.b_value = std::stod(field);
    if (seen_m.empty() || seen_m.back() != rec.m) {
      if (std::find(seen_m.begin(), seen_m.end(), rec.m) == seen_m.end()) seen_m.push_back(rec.m);
    }
    dataset.records.push_back(rec);
  }
  dataset.m_values = seen_m;
  if (!dataset.records.empty()) {
    dataset.sequences_per_m =
        static_cast<int>(dataset.records.size() / dataset.m_values.size());
  }
  return dataset;
}

}  // namespace netbench
