#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netbench/network.hpp"
#include "test_support.hpp"

#include <cmath>
#include <memory>

using namespace netbench;

namespace {

std::shared_ptr<const CliffordGroup> gate_set() {
  static auto group = std::make_shared<const CliffordGroup>(CliffordGroup::generate(1));
  return group;
}

NodeConfig plain_node(const std::string& name) {
  NodeConfig node = NodeConfig::noiseless(name);
  node.flip_index = *gate_set()->find(pauli_x());
  return node;
}

LinkConfig identity_link(const std::string& from, const std::string& to) {
  return LinkConfig{from, to, DepolarizingSpec{1.0}, Duration::zero(), false};
}

Network two_node_network(NodeConfig a, NodeConfig b, LinkConfig ab, LinkConfig ba) {
  return Network({std::move(a), std::move(b)}, {std::move(ab), std::move(ba)}, gate_set());
}

}  // namespace

TEST_CASE("prepare: noiseless preparation returns the initial state") {
  Network net = two_node_network(plain_node("A"), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  CHECK(max_abs(net.prepare("A").matrix() - DensityMatrix::computational(2, 0).matrix()) < 1e-14);
}

TEST_CASE("prepare: depolarizing preparation noise mixes the state") {
  NodeConfig a = plain_node("A");
  a.sp_noise = depolarizing_channel(2, 0.9);
  Network net = two_node_network(std::move(a), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  const CMatrix rho = net.prepare("A").matrix();
  CHECK(rho(0, 0).real() == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(rho(1, 1).real() == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("prepare: bit-flip preparation noise from explicit Kraus operators") {
  const double p = 0.1;
  NodeConfig a = plain_node("A");
  a.sp_noise = QuantumChannel::from_kraus(
      {std::sqrt(1.0 - p) * identity_matrix(2), std::sqrt(p) * pauli_x()});
  Network net = two_node_network(std::move(a), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  const CMatrix rho = net.prepare("A").matrix();
  CHECK(rho(0, 0).real() == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(rho(1, 1).real() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("apply_gate: noiseless X maps |0><0| to |1><1| and advances the clock") {
  NodeConfig a = plain_node("A");
  a.gate_duration = Duration::microseconds(39);
  Network net = two_node_network(std::move(a), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  Clock clock;
  const CliffordElement& x = net.gate_set().element(*net.gate_set().find(pauli_x()));
  const DensityMatrix out = net.apply_gate("A", x, DensityMatrix::computational(2, 0), clock);
  CHECK(max_abs(out.matrix() - DensityMatrix::computational(2, 1).matrix()) < 1e-12);
  CHECK(clock.now_ns == 39000);
}

TEST_CASE("apply_gate: gate noise composes after the ideal gate") {
  NodeConfig a = plain_node("A");
  a.gate_noise = depolarizing_channel(2, 0.8);
  Network net = two_node_network(std::move(a), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  Clock clock;
  const DensityMatrix out =
      net.apply_gate("A", net.gate_set().identity_element(), DensityMatrix::computational(2, 0), clock);
  CHECK(out.matrix()(0, 0).real() == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("apply_gate: T2 memory decoherence during the gate window") {
  NodeConfig a = plain_node("A");
  a.gate_duration = Duration::microseconds(39);
  a.t2 = Duration::milliseconds(12);
  Network net = two_node_network(std::move(a), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Clock clock;
  const DensityMatrix out =
      net.apply_gate("A", net.gate_set().identity_element(), DensityMatrix::pure(plus), clock);
  CHECK(out.matrix()(0, 1).real() ==
        doctest::Approx(0.5 * std::exp(-39e-6 / 12e-3)).epsilon(1e-12));
}

TEST_CASE("transmit: identity, teleportation with perfect resource, depolarizing") {
  Rng rng = make_rng(41);
  const DensityMatrix rho = netbench::testing::random_density(2, rng);

  Network ident = two_node_network(plain_node("A"), plain_node("B"), identity_link("A", "B"),
                                   identity_link("B", "A"));
  Clock clock;
  CHECK(max_abs(ident.transmit("A", "B", rho, clock).matrix() - rho.matrix()) < 1e-12);

  LinkConfig tele = identity_link("A", "B");
  tele.channel_spec = TeleportationSpec{DensityMatrix::pure(maximally_entangled_ket(2))};
  Network tele_net = two_node_network(plain_node("A"), plain_node("B"), std::move(tele),
                                      identity_link("B", "A"));
  CHECK(max_abs(tele_net.transmit("A", "B", rho, clock).matrix() - rho.matrix()) < 1e-12);

  LinkConfig depol = identity_link("A", "B");
  depol.channel_spec = DepolarizingSpec{0.9};
  Network depol_net = two_node_network(plain_node("A"), plain_node("B"), std::move(depol),
                                       identity_link("B", "A"));
  const CMatrix out = depol_net.transmit("A", "B", DensityMatrix::computational(2, 0), clock).matrix();
  CHECK(out(0, 0).real() == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("transmit: clock advance and missing-link errors") {
  LinkConfig ab = identity_link("A", "B");
  ab.transmit_duration = Duration::microseconds(250);
  Network net = two_node_network(plain_node("A"), plain_node("B"), std::move(ab),
                                 identity_link("B", "A"));
  Clock clock;
  net.transmit("A", "B", DensityMatrix::computational(2, 0), clock);
  CHECK(clock.now_ns == 250000);
  CHECK_THROWS_AS(net.transmit("B", "C", DensityMatrix::computational(2, 0), clock),
                  std::invalid_argument);
}

TEST_CASE("transmit: in-transit decoherence uses the destination memory") {
  NodeConfig b = plain_node("B");
  b.t2 = Duration::milliseconds(12);
  LinkConfig ab = identity_link("A", "B");
  ab.transmit_duration = Duration::microseconds(300);
  ab.decohere_in_transit = true;
  Network net = two_node_network(plain_node("A"), std::move(b), std::move(ab),
                                 identity_link("B", "A"));
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Clock clock;
  const CMatrix out = net.transmit("A", "B", DensityMatrix::pure(plus), clock).matrix();
  CHECK(out(0, 1).real() == doctest::Approx(0.5 * std::exp(-300e-6 / 12e-3)).epsilon(1e-12));
}

TEST_CASE("links are directional: A->B and B->A configured independently") {
  LinkConfig ab = identity_link("A", "B");
  ab.channel_spec = DepolarizingSpec{0.9};
  LinkConfig ba = identity_link("B", "A");
  ba.channel_spec = DepolarizingSpec{0.6};
  Network net = two_node_network(plain_node("A"), plain_node("B"), std::move(ab), std::move(ba));
  Clock clock;
  const DensityMatrix zero = DensityMatrix::computational(2, 0);
  const double forward = net.transmit("A", "B", zero, clock).matrix()(0, 0).real();
  const double backward = net.transmit("B", "A", zero, clock).matrix()(0, 0).real();
  CHECK(forward == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(backward == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("measure_expectation: projective outcomes and dual-channel noise") {
  Network net = two_node_network(plain_node("A"), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  CHECK(net.measure_expectation("A", DensityMatrix::computational(2, 0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(net.measure_expectation("A", DensityMatrix::computational(2, 1)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  NodeConfig noisy = plain_node("A");
  noisy.meas_noise = depolarizing_channel(2, 0.8);
  Network noisy_net = two_node_network(std::move(noisy), plain_node("B"), identity_link("A", "B"),
                                       identity_link("B", "A"));
  // Dual action: 0.8 * 1 + 0.2 * 0.5.
  CHECK(noisy_net.measure_expectation("A", DensityMatrix::computational(2, 0)) ==
        doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("full pass: identity-composing sequences return probability one") {
  Network net = two_node_network(plain_node("A"), plain_node("B"), identity_link("A", "B"),
                                 identity_link("B", "A"));
  const CliffordGroup& group = net.gate_set();
  Rng rng = make_rng(42);
  Clock clock;
  DensityMatrix rho = net.prepare("A");
  std::vector<std::size_t> applied;
  for (int i = 0; i < 6; ++i) {
    const CliffordElement& g = group.sample(rng);
    applied.push_back(g.index);
    rho = net.apply_gate("A", g, rho, clock);
    rho = net.transmit("A", "B", rho, clock);
    rho = net.transmit("B", "A", rho, clock);
  }
  rho = net.apply_gate("A", group.invert_sequence(applied), rho, clock);
  CHECK(net.measure_expectation("A", rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("probabilities stay in [0, 1] under heavy noise") {
  NodeConfig a = plain_node("A");
  a.sp_noise = depolarizing_channel(2, 0.3);
  a.meas_noise = amplitude_damping_channel(0.4);
  a.gate_noise = dephasing_channel(0.2);
  LinkConfig ab = identity_link("A", "B");
  ab.channel_spec = DepolarizingSpec{0.5};
  Network net = two_node_network(std::move(a), plain_node("B"), std::move(ab),
                                 identity_link("B", "A"));
  Rng rng = make_rng(43);
  Clock clock;
  DensityMatrix rho = net.prepare("A");
  for (int i = 0; i < 10; ++i) {
    rho = net.apply_gate("A", net.gate_set().sample(rng), rho, clock);
    rho = net.transmit("A", "B", rho, clock);
    rho = net.transmit("B", "A", rho, clock);
    const double p = net.measure_expectation("A", rho);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("validation: flip must send the initial state to an orthogonal state") {
  NodeConfig bad = plain_node("A");
  bad.flip_index = 0;  // identity leaves the state in place
  CHECK_THROWS_AS(two_node_network(std::move(bad), plain_node("B"), identity_link("A", "B"),
                                   identity_link("B", "A")),
                  std::invalid_argument);
}

TEST_CASE("validation: T2 bounded by 2*T1, endpoints and duplicates rejected") {
  NodeConfig bad = plain_node("A");
  bad.t1 = Duration::microseconds(10);
  bad.t2 = Duration::microseconds(25);
  CHECK_THROWS_AS(two_node_network(std::move(bad), plain_node("B"), identity_link("A", "B"),
                                   identity_link("B", "A")),
                  std::invalid_argument);

  CHECK_THROWS_AS(Network({plain_node("A")}, {identity_link("A", "B")}, gate_set()),
                  std::invalid_argument);

  CHECK_THROWS_AS(Network({plain_node("A"), plain_node("B")},
                          {identity_link("A", "B"), identity_link("A", "B")}, gate_set()),
                  std::invalid_argument);
}
