#include "netbench/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace netbench {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json kraus_to_json(const std::vector<CMatrix>& kraus) {
  json ops = json::array();
  for (const CMatrix& k : kraus) {
    json rows = json::array();
    for (Index i = 0; i < k.rows(); ++i) {
      json row = json::array();
      for (Index j = 0; j < k.cols(); ++j) {
        row.push_back({k(i, j).real(), k(i, j).imag()});
      }
      rows.push_back(row);
    }
    ops.push_back(rows);
  }
  return ops;
}

std::vector<CMatrix> kraus_from_json(const json& ops) {
  std::vector<CMatrix> kraus;
  for (const json& rows : ops) {
    const Index r = static_cast<Index>(rows.size());
    if (r == 0) throw std::invalid_argument("config: empty Kraus operator");
    const Index c = static_cast<Index>(rows[0].size());
    CMatrix k(r, c);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) {
        const json& e = rows[i][j];
        k(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
      }
    }
    kraus.push_back(std::move(k));
  }
  return kraus;
}

json noise_to_json(const NoiseSpec& noise) {
  json out{{"type", noise.type}};
  if (noise.type == "depolarizing") out["f"] = noise.f;
  if (noise.type == "amplitude_damping") out["gamma"] = noise.gamma;
  if (noise.type == "dephasing") out["p"] = noise.p;
  if (noise.type == "kraus") out["ops"] = kraus_to_json(noise.kraus);
  return out;
}

NoiseSpec noise_from_json(const json& in) {
  NoiseSpec noise;
  if (in.is_null()) return noise;
  noise.type = in.value("type", "identity");
  noise.f = in.value("f", 1.0);
  noise.gamma = in.value("gamma", 0.0);
  noise.p = in.value("p", 0.0);
  if (in.contains("ops")) noise.kraus = kraus_from_json(in.at("ops"));
  return noise;
}

QuantumChannel build_noise(const NoiseSpec& noise, Index dim) {
  if (noise.type == "identity") return QuantumChannel::identity(dim);
  if (noise.type == "depolarizing") return depolarizing_channel(dim, noise.f);
  if (noise.type == "amplitude_damping") {
    if (dim != 2) throw std::invalid_argument("config: amplitude_damping is qubit-only");
    return amplitude_damping_channel(noise.gamma);
  }
  if (noise.type == "dephasing") {
    if (dim != 2) throw std::invalid_argument("config: dephasing is qubit-only");
    return dephasing_channel(noise.p);
  }
  if (noise.type == "kraus") return QuantumChannel::from_kraus(noise.kraus);
  throw std::invalid_argument("config: unknown noise type '" + noise.type + "'");
}

json m_values_to_json(const std::vector<int>& ms) { return json(ms); }

std::vector<int> m_values_from_json(const json& in) {
  std::vector<int> out;
  if (in.is_array()) {
    for (const json& v : in) out.push_back(v.get<int>());
  } else if (in.is_object() && in.value("type", "arithmetic") == "geometric") {
    int value = in.at("from").get<int>();
    const double factor = in.at("factor").get<double>();
    const int count = in.at("count").get<int>();
    for (int i = 0; i < count; ++i) {
      out.push_back(value);
      value = std::max(value + 1, static_cast<int>(std::llround(value * factor)));
    }
  } else if (in.is_object()) {
    const int from = in.at("from").get<int>();
    const int to = in.at("to").get<int>();
    const int step = in.value("step", 1);
    if (step <= 0) throw std::invalid_argument("config: m step must be positive");
    for (int m = from; m <= to; m += step) out.push_back(m);
  } else {
    throw std::invalid_argument("config: m_values must be an array or a progression object");
  }
  if (out.empty()) throw std::invalid_argument("config: empty m list");
  return out;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json nodes_json = json::array();
  for (const NodeSpec& node : nodes) {
    nodes_json.push_back({{"name", node.name},
                          {"dim", node.dim},
                          {"sp_noise", noise_to_json(node.sp_noise)},
                          {"meas_noise", noise_to_json(node.meas_noise)},
                          {"gate_noise", noise_to_json(node.gate_noise)},
                          {"gate_duration", format_duration(node.gate_duration)},
                          {"t1", format_duration(node.t1)},
                          {"t2", format_duration(node.t2)}});
  }
  json links_json = json::array();
  for (const LinkSpec& link : links) {
    json lj{{"from", link.from},
            {"to", link.to},
            {"channel", {{"type", link.channel_type}}},
            {"transmit_duration", format_duration(link.transmit_duration)},
            {"decohere_in_transit", link.decohere_in_transit}};
    if (link.channel_type == "depolarizing") lj["channel"]["f"] = link.f;
    if (link.channel_type == "teleportation") lj["channel"]["alpha"] = link.alpha;
    if (link.channel_type == "kraus") lj["channel"]["ops"] = kraus_to_json(link.kraus);
    links_json.push_back(lj);
  }
  json out{{"name", name},
           {"gate_set_qubits", gate_set_qubits},
           {"nodes", nodes_json},
           {"links", links_json},
           {"protocol",
            {{"path", protocol.path},
             {"m_values", m_values_to_json(protocol.m_values)},
             {"sequences_per_m", protocol.sequences_per_m},
             {"shots", protocol.shots},
             {"shot_model", to_string(protocol.shot_model)},
             {"master_seed", protocol.master_seed}}}};
  return out.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json in = json::parse(text);
  ExperimentConfig config;
  config.name = in.value("name", "custom");
  config.gate_set_qubits = in.value("gate_set_qubits", 1);
  for (const json& nj : in.at("nodes")) {
    NodeSpec node;
    node.name = nj.at("name").get<std::string>();
    node.dim = nj.value("dim", 2);
    if (nj.contains("sp_noise")) node.sp_noise = noise_from_json(nj.at("sp_noise"));
    if (nj.contains("meas_noise")) node.meas_noise = noise_from_json(nj.at("meas_noise"));
    if (nj.contains("gate_noise")) node.gate_noise = noise_from_json(nj.at("gate_noise"));
    node.gate_duration = parse_duration(nj.value("gate_duration", "0ns"));
    node.t1 = parse_duration(nj.value("t1", "inf"));
    node.t2 = parse_duration(nj.value("t2", "inf"));
    config.nodes.push_back(std::move(node));
  }
  for (const json& lj : in.at("links")) {
    LinkSpec link;
    link.from = lj.at("from").get<std::string>();
    link.to = lj.at("to").get<std::string>();
    const json& cj = lj.at("channel");
    link.channel_type = cj.value("type", "depolarizing");
    link.f = cj.value("f", 1.0);
    link.alpha = cj.value("alpha", 1.0);
    if (cj.contains("ops")) link.kraus = kraus_from_json(cj.at("ops"));
    link.transmit_duration = parse_duration(lj.value("transmit_duration", "0ns"));
    link.decohere_in_transit = lj.value("decohere_in_transit", false);
    config.links.push_back(std::move(link));
  }
  const json& pj = in.at("protocol");
  config.protocol.path = pj.at("path").get<std::vector<std::string>>();
  config.protocol.m_values = m_values_from_json(pj.at("m_values"));
  config.protocol.sequences_per_m = pj.value("sequences_per_m", 40);
  config.protocol.shots = pj.value("shots", 4000);
  config.protocol.shot_model = parse_shot_model(pj.value("shot_model", "gaussian"));
  config.protocol.master_seed = pj.value("master_seed", static_cast<std::uint64_t>(20260809));
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string ExperimentConfig::hash() const {
  const std::string text = to_json();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DensityMatrix bright_state_resource(double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("bright_state_resource: alpha in [0, 1]");
  }
  const CVector phi = maximally_entangled_ket(2);
  CMatrix rho = alpha * (phi * phi.adjoint());
  rho(0, 0) += 1.0 - alpha;  // |00><00|
  return DensityMatrix(4, rho);
}

namespace {

ExperimentConfig two_node_skeleton(const std::string& name) {
  ExperimentConfig config;
  config.name = name;
  config.gate_set_qubits = 1;
  config.nodes.push_back(NodeSpec{.name = "A"});
  config.nodes.push_back(NodeSpec{.name = "B"});
  config.protocol.path = {"A", "B"};
  config.protocol.m_values.resize(20);
  for (int i = 0; i < 20; ++i) config.protocol.m_values[i] = i + 1;
  return config;
}

LinkSpec directed_link(std::string from, std::string to) {
  LinkSpec link;
  link.from = std::move(from);
  link.to = std::move(to);
  return link;
}

}  // namespace

ExperimentConfig preset_noiseless() {
  ExperimentConfig config = two_node_skeleton("noiseless");
  for (auto dir : {std::pair{"A", "B"}, std::pair{"B", "A"}}) {
    LinkSpec link = directed_link(dir.first, dir.second);
    link.channel_type = "identity";
    config.links.push_back(link);
  }
  config.protocol.shot_model = ShotModel::exact;
  return config;
}

ExperimentConfig preset_depol_081() {
  ExperimentConfig config = two_node_skeleton("depol-0.81");
  for (auto dir : {std::pair{"A", "B"}, std::pair{"B", "A"}}) {
    LinkSpec link = directed_link(dir.first, dir.second);
    link.channel_type = "depolarizing";
    link.f = 0.9;
    config.links.push_back(link);
  }
  config.protocol.shot_model = ShotModel::gaussian;
  return config;
}

ExperimentConfig preset_tele_ideal() {
  ExperimentConfig config = two_node_skeleton("tele-ideal");
  for (auto dir : {std::pair{"A", "B"}, std::pair{"B", "A"}}) {
    LinkSpec link = directed_link(dir.first, dir.second);
    link.channel_type = "teleportation";
    link.alpha = 0.95;
    config.links.push_back(link);
  }
  config.protocol.shot_model = ShotModel::gaussian;
  return config;
}

// NV-inspired regime: bright-state population 0.95, 12 ms memory dephasing,
// 39 us native gates.  The transmit window models the slow local operations
// of the teleportation step (two-qubit gate plus feed-forward), during which
// the flying qubit sits in the destination memory.
ExperimentConfig preset_paper_2node() {
  ExperimentConfig config = two_node_skeleton("paper-2node");
  for (NodeSpec& node : config.nodes) {
    node.t2 = parse_duration("12ms");
    node.gate_duration = parse_duration("39us");
  }
  for (auto dir : {std::pair{"A", "B"}, std::pair{"B", "A"}}) {
    LinkSpec link = directed_link(dir.first, dir.second);
    link.channel_type = "teleportation";
    link.alpha = 0.95;
    link.transmit_duration = parse_duration("300us");
    link.decohere_in_transit = true;
    config.links.push_back(link);
  }
  config.protocol.shot_model = ShotModel::gaussian;
  return config;
}

ExperimentConfig preset_paper_multinode(int k_nodes) {
  if (k_nodes < 2) throw std::invalid_argument("preset_paper_multinode: need >= 2 nodes");
  ExperimentConfig base = preset_paper_2node();
  ExperimentConfig config;
  config.name = "paper-multinode";
  config.gate_set_qubits = 1;
  for (int k = 0; k < k_nodes; ++k) {
    NodeSpec node = base.nodes.front();
    node.name = "N" + std::to_string(k + 1);
    config.nodes.push_back(std::move(node));
    config.protocol.path.push_back("N" + std::to_string(k + 1));
  }
  for (int k = 0; k + 1 < k_nodes; ++k) {
    LinkSpec forward = base.links.front();
    forward.from = "N" + std::to_string(k + 1);
    forward.to = "N" + std::to_string(k + 2);
    LinkSpec backward = forward;
    std::swap(backward.from, backward.to);
    config.links.push_back(std::move(forward));
    config.links.push_back(std::move(backward));
  }
  config.protocol.m_values.resize(9);
  for (int i = 0; i < 9; ++i) config.protocol.m_values[i] = i + 1;
  config.protocol.shot_model = ShotModel::gaussian;
  return config;
}

ExperimentConfig make_preset(const std::string& name) {
  if (name == "noiseless") return preset_noiseless();
  if (name == "depol-0.81") return preset_depol_081();
  if (name == "tele-ideal") return preset_tele_ideal();
  if (name == "paper-2node") return preset_paper_2node();
  if (name == "paper-multinode") return preset_paper_multinode(2);
  throw std::invalid_argument("unknown preset '" + name + "'");
}

Network build_network(const ExperimentConfig& config,
                      std::shared_ptr<const CliffordGroup> gate_set) {
  if (!gate_set) {
    gate_set = std::make_shared<const CliffordGroup>(CliffordGroup::generate(config.gate_set_qubits));
  }
  std::vector<NodeConfig> nodes;
  for (const NodeSpec& spec : config.nodes) {
    NodeConfig node = NodeConfig::noiseless(spec.name, spec.dim);
    node.sp_noise = build_noise(spec.sp_noise, spec.dim);
    node.meas_noise = build_noise(spec.meas_noise, spec.dim);
    node.gate_noise = build_noise(spec.gate_noise, spec.dim);
    node.gate_duration = spec.gate_duration;
    node.t1 = spec.t1;
    node.t2 = spec.t2;
    // All-qubit X sends |0...0> to an orthogonal state.
    CMatrix flip = pauli_x();
    for (int q = 1; q < config.gate_set_qubits; ++q) flip = kron(flip, pauli_x());
    const auto flip_index = gate_set->find(flip);
    if (!flip_index) throw std::runtime_error("build_network: flip unitary not in gate set");
    node.flip_index = *flip_index;
    nodes.push_back(std::move(node));
  }
  std::vector<LinkConfig> links;
  for (const LinkSpec& spec : config.links) {
    LinkConfig link;
    link.from = spec.from;
    link.to = spec.to;
    link.transmit_duration = spec.transmit_duration;
    link.decohere_in_transit = spec.decohere_in_transit;
    if (spec.channel_type == "identity") {
      link.channel_spec = DepolarizingSpec{1.0};
    } else if (spec.channel_type == "depolarizing") {
      link.channel_spec = DepolarizingSpec{spec.f};
    } else if (spec.channel_type == "teleportation") {
      link.channel_spec = TeleportationSpec{bright_state_resource(spec.alpha)};
    } else if (spec.channel_type == "kraus") {
      link.channel_spec = QuantumChannel::from_kraus(spec.kraus);
    } else {
      throw std::invalid_argument("config: unknown link channel type '" + spec.channel_type + "'");
    }
    links.push_back(std::move(link));
  }
  return Network(std::move(nodes), std::move(links), std::move(gate_set));
}

RunResult run_experiment(const ExperimentConfig& config, int jobs, int bootstrap_resamples) {
  RunResult result;
  result.config = config;
  result.config_hash = config.hash();
  Network network = build_network(config);
  ProtocolParams params;
  params.m_values = config.protocol.m_values;
  params.sequences_per_m = config.protocol.sequences_per_m;
  params.shots = config.protocol.shots;
  params.shot_model = config.protocol.shot_model;
  params.master_seed = config.protocol.master_seed;
  params.jobs = jobs;
  result.dataset = run_protocol_multinode(network, config.protocol.path, params);
  result.fit = fit_decay(result.dataset);
  bootstrap_ci(result.dataset, result.fit,
               BootstrapOptions{bootstrap_resamples, derive_seed(params.master_seed, 0xb007ULL)});
  result.link = symmetric_link_fidelity(result.fit.f, static_cast<int>(network.gate_set().dim()));
  return result;
}

namespace {

json fit_to_json(const FitResult& fit) {
  json out{{"amplitude", fit.amplitude},
           {"f", fit.f},
           {"ci_amplitude", {fit.ci_amplitude[0], fit.ci_amplitude[1]}},
           {"ci_f", {fit.ci_f[0], fit.ci_f[1]}},
           {"se_amplitude", fit.se_amplitude},
           {"se_f", fit.se_f},
           {"m_values", fit.m_values},
           {"residuals", fit.residuals},
           {"iterations", fit.iterations},
           {"method", fit.method}};
  return out;
}

}  // namespace

void write_run_outputs(const RunResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_decay_csv_file(result.dataset, out_dir + "/decay.csv");
  {
    std::ofstream side(out_dir + "/decay.meta.json");
    side << sidecar_json(result.dataset, result.config_hash);
  }
  json fj = fit_to_json(result.fit);
  fj["config_hash"] = result.config_hash;
  fj["master_seed"] = result.dataset.master_seed;
  fj["f_link_symmetric"] = result.link.f_link;
  fj["f_avg_symmetric"] = result.link.f_avg;
  json variance = json::array();
  for (int m : result.dataset.m_values) {
    const VarianceComponents comp = variance_decomposition(result.dataset, m);
    variance.push_back({{"m", m},
                        {"v_gate", comp.v_gate},
                        {"v_meas", comp.v_meas},
                        {"v_diff", comp.v_diff},
                        {"total", comp.total()}});
  }
  fj["variance_components"] = variance;
  {
    std::ofstream out(out_dir + "/fit.json");
    out << fj.dump(2) << '\n';
  }
  {
    std::ofstream out(out_dir + "/summary.txt");
    out << "config " << result.config.name << " hash " << result.config_hash << " seed "
        << result.dataset.master_seed << "\n";
    out << "f = " << format_double(result.fit.f) << "  ci95 = ["
        << format_double(result.fit.ci_f[0]) << ", " << format_double(result.fit.ci_f[1]) << "]\n";
    out << "A = " << format_double(result.fit.amplitude) << "  ci95 = ["
        << format_double(result.fit.ci_amplitude[0]) << ", "
        << format_double(result.fit.ci_amplitude[1]) << "]\n";
    out << "per-direction (symmetric links): f_link = " << format_double(result.link.f_link)
        << "  F_avg = " << format_double(result.link.f_avg) << "\n";
  }
}

SweepResult run_multinode_sweep(const ExperimentConfig& config, int k_min, int k_max, int jobs,
                                int bootstrap_resamples) {
  if (k_min < 2 || k_max < k_min) throw std::invalid_argument("sweep: need 2 <= k_min <= k_max");
  SweepResult result;
  result.config_hash = config.hash();
  result.master_seed = config.protocol.master_seed;

  for (int k = k_min; k <= k_max; ++k) {
    // Homogeneous chain from the first node/link templates of the config.
    ExperimentConfig chain = config;
    chain.nodes.clear();
    chain.links.clear();
    chain.protocol.path.clear();
    for (int i = 0; i < k; ++i) {
      NodeSpec node = config.nodes.front();
      node.name = "N" + std::to_string(i + 1);
      chain.nodes.push_back(std::move(node));
      chain.protocol.path.push_back("N" + std::to_string(i + 1));
    }
    for (int i = 0; i + 1 < k; ++i) {
      LinkSpec forward = config.links.front();
      forward.from = "N" + std::to_string(i + 1);
      forward.to = "N" + std::to_string(i + 2);
      LinkSpec backward = forward;
      std::swap(backward.from, backward.to);
      chain.links.push_back(std::move(forward));
      chain.links.push_back(std::move(backward));
    }
    const RunResult run = run_experiment(chain, jobs, bootstrap_resamples);
    result.entries.push_back(SweepEntry{k, run.fit});
  }

  // log f versus K regression.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(result.entries.size());
  for (const SweepEntry& e : result.entries) {
    const double x = e.k;
    const double y = std::log(e.fit.f);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom > 0.0 && n >= 2) {
    result.log_f_slope = (n * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    const double intercept = (sy - result.log_f_slope * sx) / n;
    for (const SweepEntry& e : result.entries) {
      const double r = std::log(e.fit.f) - (intercept + result.log_f_slope * e.k);
      ss_res += r * r;
    }
    result.log_f_r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return result;
}

void write_sweep_outputs(const SweepResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/sweep.csv");
  csv << "k,f,ci_lo,ci_hi,amplitude\n";
  for (const SweepEntry& e : result.entries) {
    csv << e.k << ',' << format_double(e.fit.f) << ',' << format_double(e.fit.ci_f[0]) << ','
        << format_double(e.fit.ci_f[1]) << ',' << format_double(e.fit.amplitude) << '\n';
  }
  {
    std::ofstream meta(out_dir + "/sweep.meta.json");
    json mj{{"config_hash", result.config_hash}, {"master_seed", result.master_seed}};
    meta << mj.dump(2) << '\n';
  }
  std::ofstream out(out_dir + "/summary.txt");
  out << "config hash " << result.config_hash << " seed " << result.master_seed << "\n";
  out << "log f slope per node: " << format_double(result.log_f_slope)
      << "  r_squared: " << format_double(result.log_f_r_squared) << "\n";
  for (const SweepEntry& e : result.entries) {
    out << "K=" << e.k << "  f = " << format_double(e.fit.f) << "  ci95 = ["
        << format_double(e.fit.ci_f[0]) << ", " << format_double(e.fit.ci_f[1]) << "]\n";
  }
}

void write_plan_outputs(const StatReport& report, double f_guess, double amplitude_guess,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/fisher_curve.csv");
  csv << "m,fisher_per_sample,fisher_per_cost\n";
  for (std::size_t i = 0; i < report.m_grid.size(); ++i) {
    csv << report.m_grid[i] << ',' << format_double(report.fisher_per_sample[i]) << ','
        << format_double(report.fisher_per_cost[i]) << '\n';
  }
  std::ofstream out(out_dir + "/plan.json");
  json pj{{"f_guess", f_guess},
          {"amplitude_guess", amplitude_guess},
          {"m_star", report.m_star},
          {"crb_variance_lower_bound", report.crb_variance_lower_bound}};
  out << pj.dump(2) << '\n';
}

}  // namespace netbench
