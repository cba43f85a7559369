#pragma once

#include "netbench/channel.hpp"
#include "netbench/clifford.hpp"
#include "netbench/density_matrix.hpp"
#include "netbench/duration.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace netbench {

// Per-sequence simulation clock; each concurrent run owns its own.
struct Clock {
  std::int64_t now_ns = 0;
  void advance(Duration d) { now_ns += d.count_ns(); }
};

struct NodeConfig {
  std::string name;
  Index dim = 2;
  QuantumChannel sp_noise = QuantumChannel::identity(2);
  QuantumChannel meas_noise = QuantumChannel::identity(2);
  QuantumChannel gate_noise = QuantumChannel::identity(2);
  Duration gate_duration = Duration::zero();
  Duration t1 = Duration::infinite();
  Duration t2 = Duration::infinite();
  DensityMatrix initial_state = DensityMatrix::computational(2, 0);
  Effect effect = Effect::computational(2, 0);
  // Ending gate P sending initial_state to an orthogonal state; stored as an
  // index into the network's gate set.
  std::size_t flip_index = 0;

  static NodeConfig noiseless(std::string name, Index dim = 2);
};

// Directed link noise: an explicit channel, teleportation over a resource
// state, or a depolarizing channel with fidelity f.
struct TeleportationSpec {
  DensityMatrix resource;
};
struct DepolarizingSpec {
  double f = 1.0;
};
using ChannelSpec = std::variant<QuantumChannel, TeleportationSpec, DepolarizingSpec>;

QuantumChannel resolve_channel_spec(const ChannelSpec& spec, Index dim);

struct LinkConfig {
  std::string from;
  std::string to;
  ChannelSpec channel_spec = DepolarizingSpec{1.0};
  Duration transmit_duration = Duration::zero();
  // When set, the state additionally decoheres for transmit_duration with the
  // destination node's T1/T2.
  bool decohere_in_transit = false;
};

// Immutable network model: nodes with SPAM/gate noise and memory decoherence,
// directed links with channel-valued noise.  Both link directions are
// configured independently.
class Network {
 public:
  Network(std::vector<NodeConfig> nodes, std::vector<LinkConfig> links,
          std::shared_ptr<const CliffordGroup> gate_set);

  const CliffordGroup& gate_set() const { return *gate_set_; }
  std::shared_ptr<const CliffordGroup> gate_set_ptr() const { return gate_set_; }

  const NodeConfig& node(const std::string& name) const;
  const LinkConfig& link(const std::string& from, const std::string& to) const;
  bool has_link(const std::string& from, const std::string& to) const;

  DensityMatrix prepare(const std::string& node) const;
  DensityMatrix apply_gate(const std::string& node, const CliffordElement& gate,
                           const DensityMatrix& rho, Clock& clock) const;
  DensityMatrix transmit(const std::string& from, const std::string& to,
                         const DensityMatrix& rho, Clock& clock) const;
  double measure_expectation(const std::string& node, const DensityMatrix& rho) const;

 private:
  struct ResolvedNode {
    NodeConfig config;
    QuantumChannel post_gate;  // gate noise followed by gate-duration decoherence
    CMatrix noisy_effect;      // meas_noise applied to the effect in the dual
  };
  struct ResolvedLink {
    LinkConfig config;
    QuantumChannel channel;      // link noise
    QuantumChannel post_transit; // destination decoherence during transmission
  };

  const ResolvedNode& resolved_node(const std::string& name) const;

  std::map<std::string, ResolvedNode> nodes_;
  std::map<std::pair<std::string, std::string>, ResolvedLink> links_;
  std::shared_ptr<const CliffordGroup> gate_set_;
};

}  // namespace netbench
