#include "netbench/network.hpp"

#include <cmath>
#include <stdexcept>

namespace netbench {

namespace {

// Independent T1/T2 decay on every qubit of the register.
QuantumChannel register_decoherence(Index dim, Duration t, Duration t1, Duration t2) {
  const QuantumChannel single = decoherence_channel(t, t1, t2);
  if (dim == 2) return single;
  if (dim == 4) {
    std::vector<CMatrix> kraus;
    for (const CMatrix& a : single.kraus_ops()) {
      for (const CMatrix& b : single.kraus_ops()) {
        kraus.push_back(kron(a, b));
      }
    }
    return QuantumChannel::from_kraus(std::move(kraus));
  }
  throw std::invalid_argument("register_decoherence: only 1- and 2-qubit registers supported");
}

}  // namespace

NodeConfig NodeConfig::noiseless(std::string name, Index dim) {
  NodeConfig node;
  node.name = std::move(name);
  node.dim = dim;
  node.sp_noise = QuantumChannel::identity(dim);
  node.meas_noise = QuantumChannel::identity(dim);
  node.gate_noise = QuantumChannel::identity(dim);
  node.initial_state = DensityMatrix::computational(dim, 0);
  node.effect = Effect::computational(dim, 0);
  return node;
}

QuantumChannel resolve_channel_spec(const ChannelSpec& spec, Index dim) {
  if (const auto* explicit_channel = std::get_if<QuantumChannel>(&spec)) {
    if (explicit_channel->dim() != dim) {
      throw std::invalid_argument("link channel dimension mismatch");
    }
    return *explicit_channel;
  }
  if (const auto* tele = std::get_if<TeleportationSpec>(&spec)) {
    QuantumChannel channel = teleportation_channel(tele->resource);
    if (channel.dim() != dim) throw std::invalid_argument("teleportation link dimension mismatch");
    return channel;
  }
  return depolarizing_channel(dim, std::get<DepolarizingSpec>(spec).f);
}

Network::Network(std::vector<NodeConfig> nodes, std::vector<LinkConfig> links,
                 std::shared_ptr<const CliffordGroup> gate_set)
    : gate_set_(std::move(gate_set)) {
  if (!gate_set_) throw std::invalid_argument("Network: missing gate set");
  for (NodeConfig& node : nodes) {
    if (node.dim != gate_set_->dim()) {
      throw std::invalid_argument("Network: node dimension does not match gate set");
    }
    if (node.sp_noise.dim() != node.dim || node.meas_noise.dim() != node.dim ||
        node.gate_noise.dim() != node.dim) {
      throw std::invalid_argument("Network: node channel dimensions inconsistent");
    }
    if (!(node.t2 <= node.t1.scaled(2))) {
      throw std::invalid_argument("Network: node requires T2 <= 2*T1");
    }
    node.initial_state.validate();
    node.effect.validate();
    node.sp_noise.validate();
    node.meas_noise.validate();
    node.gate_noise.validate();

    const CMatrix& p = gate_set_->element(node.flip_index).unitary;
    const CMatrix& rho = node.initial_state.matrix();
    const double overlap = (p * rho * p.adjoint() * rho).trace().real();
    if (overlap > 1e-10) {
      throw std::invalid_argument("Network: flip unitary must map the initial state to an orthogonal state");
    }

    ResolvedNode resolved{node,
                          compose(register_decoherence(node.dim, node.gate_duration, node.t1, node.t2),
                                  node.gate_noise),
                          node.meas_noise.adjoint_apply(node.effect.matrix())};
    const std::string name = node.name;
    if (!nodes_.emplace(name, std::move(resolved)).second) {
      throw std::invalid_argument("Network: duplicate node name '" + name + "'");
    }
  }

  for (LinkConfig& link : links) {
    const auto from_it = nodes_.find(link.from);
    const auto to_it = nodes_.find(link.to);
    if (from_it == nodes_.end() || to_it == nodes_.end()) {
      throw std::invalid_argument("Network: link endpoint does not exist");
    }
    const NodeConfig& to_node = to_it->second.config;
    QuantumChannel channel = resolve_channel_spec(link.channel_spec, to_node.dim);
    channel.validate();
    QuantumChannel post_transit =
        link.decohere_in_transit
            ? register_decoherence(to_node.dim, link.transmit_duration, to_node.t1, to_node.t2)
            : QuantumChannel::identity(to_node.dim);
    const auto key = std::make_pair(link.from, link.to);
    if (!links_.emplace(key, ResolvedLink{link, std::move(channel), std::move(post_transit)}).second) {
      throw std::invalid_argument("Network: duplicate link " + link.from + "->" + link.to);
    }
  }
}

const Network::ResolvedNode& Network::resolved_node(const std::string& name) const {
  const auto it = nodes_.find(name);
  if (it == nodes_.end()) throw std::invalid_argument("Network: unknown node '" + name + "'");
  return it->second;
}

const NodeConfig& Network::node(const std::string& name) const {
  return resolved_node(name).config;
}

const LinkConfig& Network::link(const std::string& from, const std::string& to) const {
  const auto it = links_.find(std::make_pair(from, to));
  if (it == links_.end()) {
    throw std::invalid_argument("Network: missing link " + from + "->" + to);
  }
  return it->second.config;
}

bool Network::has_link(const std::string& from, const std::string& to) const {
  return links_.count(std::make_pair(from, to)) > 0;
}

DensityMatrix Network::prepare(const std::string& node) const {
  const ResolvedNode& n = resolved_node(node);
  return n.config.sp_noise.apply(n.config.initial_state);
}

DensityMatrix Network::apply_gate(const std::string& node, const CliffordElement& gate,
                                  const DensityMatrix& rho, Clock& clock) const {
  const ResolvedNode& n = resolved_node(node);
  if (rho.dim() != n.config.dim || gate.unitary.rows() != n.config.dim) {
    throw std::invalid_argument("apply_gate: dimension mismatch");
  }
  CMatrix rotated = gate.unitary * rho.matrix() * gate.unitary.adjoint();
  clock.advance(n.config.gate_duration);
  return DensityMatrix(n.config.dim, n.post_gate.apply_matrix(rotated));
}

DensityMatrix Network::transmit(const std::string& from, const std::string& to,
                                const DensityMatrix& rho, Clock& clock) const {
  const auto it = links_.find(std::make_pair(from, to));
  if (it == links_.end()) {
    throw std::invalid_argument("transmit: missing link " + from + "->" + to);
  }
  const ResolvedLink& link = it->second;
  clock.advance(link.config.transmit_duration);
  CMatrix out = link.channel.apply_matrix(rho.matrix());
  return DensityMatrix(rho.dim(), link.post_transit.apply_matrix(out));
}

double Network::measure_expectation(const std::string& node, const DensityMatrix& rho) const {
  const ResolvedNode& n = resolved_node(node);
  if (rho.dim() != n.config.dim) throw std::invalid_argument("measure_expectation: dims");
  const double p = (n.noisy_effect * rho.matrix()).trace().real();
  if (p < -1e-8 || p > 1.0 + 1e-8) {
    throw std::runtime_error("measure_expectation: probability far outside [0, 1]");
  }
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace netbench
