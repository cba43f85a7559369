#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netbench/channel.hpp"
#include "netbench/clifford.hpp"
#include "test_support.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace netbench;
using netbench::testing::ginibre;
using netbench::testing::haar_ket;
using netbench::testing::random_channel;
using netbench::testing::random_density;

namespace {

double superop_distance(const QuantumChannel& a, const QuantumChannel& b) {
  return max_abs(a.superop() - b.superop());
}

// Independent oracle for the entanglement fidelity: build (1 (x) Lambda)(Phi)
// explicitly and project onto Phi.
double entanglement_fidelity_choi_oracle(const QuantumChannel& channel) {
  const Index d = channel.dim();
  const CVector phi = maximally_entangled_ket(d);
  const CMatrix phi_state = phi * phi.adjoint();
  CMatrix out = CMatrix::Zero(d * d, d * d);
  const CMatrix id = identity_matrix(d);
  for (const CMatrix& k : channel.kraus_ops()) {
    const CMatrix lifted = kron(id, k);
    out += lifted * phi_state * lifted.adjoint();
  }
  return (phi.adjoint() * out * phi)(0, 0).real();
}

}  // namespace

TEST_CASE("apply: identity channel leaves states unchanged") {
  Rng rng = make_rng(11);
  const QuantumChannel id = QuantumChannel::identity(2);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho = random_density(2, rng);
    CHECK(max_abs(id.apply(rho).matrix() - rho.matrix()) < 1e-14);
  }
}

TEST_CASE("apply: fully depolarizing channel maps onto the maximally mixed state") {
  const QuantumChannel depol = depolarizing_channel(2, 0.0);
  const DensityMatrix rho = DensityMatrix::computational(2, 0);
  const CMatrix out = depol.apply(rho).matrix();
  CHECK(max_abs(out - 0.5 * identity_matrix(2)) < 1e-12);
}

TEST_CASE("apply: amplitude damping matches the hand-applied Kraus pair") {
  const QuantumChannel ad = amplitude_damping_channel(0.3);
  const DensityMatrix one = DensityMatrix::computational(2, 1);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 0.3;
  expected(1, 1) = 0.7;
  CHECK(max_abs(ad.apply(one).matrix() - expected) < 1e-12);
  CHECK_NOTHROW(ad.validate());
}

TEST_CASE("apply: dimension mismatch is rejected") {
  const QuantumChannel id4 = QuantumChannel::identity(4);
  CHECK_THROWS_AS(id4.apply(DensityMatrix::computational(2, 0)), std::invalid_argument);
}

TEST_CASE("compose: identity is neutral and unitaries multiply") {
  Rng rng = make_rng(12);
  const QuantumChannel lambda = random_channel(2, rng);
  CHECK(superop_distance(compose(lambda, QuantumChannel::identity(2)), lambda) < 1e-12);
  CHECK(superop_distance(compose(QuantumChannel::identity(2), lambda), lambda) < 1e-12);

  const CMatrix u = hadamard();
  const CMatrix v = phase_s();
  const QuantumChannel uv = compose(QuantumChannel::unitary(u), QuantumChannel::unitary(v));
  CHECK(superop_distance(uv, QuantumChannel::unitary(u * v)) < 1e-12);
}

TEST_CASE("compose: depolarizing channels form a semigroup") {
  const QuantumChannel a = depolarizing_channel(2, 0.9);
  const QuantumChannel b = depolarizing_channel(2, 0.7);
  CHECK(superop_distance(compose(a, b), depolarizing_channel(2, 0.9 * 0.7)) < 1e-12);
}

TEST_CASE("compose: associative on random triples") {
  Rng rng = make_rng(13);
  for (int i = 0; i < 20; ++i) {
    const QuantumChannel a = random_channel(2, rng);
    const QuantumChannel b = random_channel(2, rng);
    const QuantumChannel c = random_channel(2, rng);
    CHECK(superop_distance(compose(compose(a, b), c), compose(a, compose(b, c))) < 1e-12);
  }
}

TEST_CASE("depolarizing_channel: endpoints and parameter range") {
  CHECK(superop_distance(depolarizing_channel(2, 1.0), QuantumChannel::identity(2)) < 1e-12);

  const QuantumChannel full = depolarizing_channel(2, 0.0);
  Rng rng = make_rng(14);
  const DensityMatrix rho = random_density(2, rng);
  CHECK(max_abs(full.apply(rho).matrix() - 0.5 * identity_matrix(2)) < 1e-12);

  CHECK(average_fidelity(depolarizing_channel(2, 0.9)) == doctest::Approx(0.95).epsilon(1e-12));

  CHECK_THROWS_AS(depolarizing_channel(2, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_channel(2, -0.5), std::invalid_argument);
  CHECK_NOTHROW(depolarizing_channel(2, -1.0 / 3.0));  // boundary of the CPTP range
  CHECK_NOTHROW(depolarizing_channel(4, 0.3).validate());
}

TEST_CASE("entanglement_fidelity: identity, depolarizing and Choi oracle") {
  CHECK(entanglement_fidelity(QuantumChannel::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entanglement_fidelity(depolarizing_channel(2, 0.0)) == doctest::Approx(0.25).epsilon(1e-12));
  for (double f : {0.3, 0.6, 0.9}) {
    const QuantumChannel depol = depolarizing_channel(2, f);
    CHECK(entanglement_fidelity(depol) == doctest::Approx((3.0 * f + 1.0) / 4.0).epsilon(1e-12));
    CHECK(entanglement_fidelity(depol) ==
          doctest::Approx(entanglement_fidelity_choi_oracle(depol)).epsilon(1e-12));
  }
  Rng rng = make_rng(15);
  for (int i = 0; i < 10; ++i) {
    const QuantumChannel lambda = random_channel(2, rng);
    CHECK(entanglement_fidelity(lambda) ==
          doctest::Approx(entanglement_fidelity_choi_oracle(lambda)).epsilon(1e-12));
  }
}

TEST_CASE("average_fidelity: Monte-Carlo Haar oracle within 3 standard errors") {
  Rng rng = make_rng(16);
  for (int trial = 0; trial < 3; ++trial) {
    const QuantumChannel lambda = random_channel(2, rng);
    const int samples = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < samples; ++s) {
      const CVector psi = haar_ket(2, rng);
      const CMatrix rho = psi * psi.adjoint();
      const double overlap = (psi.adjoint() * lambda.apply_matrix(rho) * psi)(0, 0).real();
      sum += overlap;
      sum_sq += overlap * overlap;
    }
    const double mc_mean = sum / samples;
    const double mc_var = (sum_sq / samples - mc_mean * mc_mean) / samples;
    const double mc_se = std::sqrt(mc_var);
    CHECK(std::abs(average_fidelity(lambda) - mc_mean) < 3.0 * mc_se);
  }
}

TEST_CASE("depolarizing_fidelity: identity, round trip, teleportation value") {
  CHECK(depolarizing_fidelity(QuantumChannel::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(depolarizing_fidelity(depolarizing_channel(2, 0.8)) == doctest::Approx(0.8).epsilon(1e-12));

  // alpha = 0.95 resource: F_e = (1 + alpha)/2 through the singlet fraction,
  // so f = (4 F_e - 1)/3 = 0.96667 (rounded); computed against the oracle.
  const CVector phi = maximally_entangled_ket(2);
  CMatrix res = 0.95 * (phi * phi.adjoint());
  res(0, 0) += 0.05;
  const DensityMatrix resource(4, res);
  const double f_expected = (4.0 * singlet_fraction(resource) - 1.0) / 3.0;
  CHECK(f_expected == doctest::Approx((4.0 * 0.975 - 1.0) / 3.0).epsilon(1e-12));
  CHECK(depolarizing_fidelity(teleportation_channel(resource)) ==
        doctest::Approx(f_expected).epsilon(1e-9));
}

TEST_CASE("twirl: depolarizing and identity channels are fixed points") {
  const CliffordGroup group = CliffordGroup::generate(1);
  const QuantumChannel depol = depolarizing_channel(2, 0.85);
  CHECK(superop_distance(twirl(depol, group), depol) < 1e-10);
  CHECK(superop_distance(twirl(QuantumChannel::identity(2), group), QuantumChannel::identity(2)) <
        1e-10);
}

TEST_CASE("twirl: amplitude damping projects onto its depolarizing fidelity") {
  const CliffordGroup group = CliffordGroup::generate(1);
  const QuantumChannel ad = amplitude_damping_channel(0.2);
  const QuantumChannel twirled = twirl(ad, group);
  const QuantumChannel expected = depolarizing_channel(2, depolarizing_fidelity(ad));
  CHECK(superop_distance(twirled, expected) < 1e-10);
  CHECK_NOTHROW(twirled.validate());
}

TEST_CASE("twirl: 100 random single-qubit channels land on depolarizing form") {
  const CliffordGroup group = CliffordGroup::generate(1);
  Rng rng = make_rng(17);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const QuantumChannel lambda = random_channel(2, rng);
    const QuantumChannel twirled = twirl(lambda, group);
    const QuantumChannel expected = depolarizing_channel(2, depolarizing_fidelity(lambda));
    worst = std::max(worst, superop_distance(twirled, expected));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("singlet_fraction: reference states") {
  const CVector phi = maximally_entangled_ket(2);
  CHECK(singlet_fraction(DensityMatrix::pure(phi)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(singlet_fraction(DensityMatrix::computational(4, 0)) == doctest::Approx(0.5).epsilon(1e-12));

  CMatrix res = 0.95 * (phi * phi.adjoint());
  res(0, 0) += 0.05;
  CHECK(singlet_fraction(DensityMatrix(4, res)) == doctest::Approx(0.975).epsilon(1e-12));

  CHECK_THROWS_AS(singlet_fraction(DensityMatrix::maximally_mixed(3)), std::invalid_argument);
}

TEST_CASE("teleportation_channel: perfect resource gives the identity channel") {
  const DensityMatrix phi = DensityMatrix::pure(maximally_entangled_ket(2));
  CHECK(superop_distance(teleportation_channel(phi), QuantumChannel::identity(2)) < 1e-12);
}

TEST_CASE("teleportation_channel: bright-state resources reduce to Phi at alpha = 1") {
  const CVector phi = maximally_entangled_ket(2);
  CMatrix res = 1.0 * (phi * phi.adjoint());
  CHECK(superop_distance(teleportation_channel(DensityMatrix(4, res)), QuantumChannel::identity(2)) <
        1e-12);

  res *= 0.95;
  res(0, 0) += 0.05;
  CHECK(entanglement_fidelity(teleportation_channel(DensityMatrix(4, res))) ==
        doctest::Approx(0.975).epsilon(1e-10));
}

TEST_CASE("teleportation_channel: entanglement fidelity equals the singlet fraction") {
  Rng rng = make_rng(18);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix resource = random_density(4, rng);
    const QuantumChannel channel = teleportation_channel(resource);
    worst = std::max(worst,
                     std::abs(entanglement_fidelity(channel) - singlet_fraction(resource)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("teleportation_channel: non-qubit resources rejected") {
  CHECK_THROWS_AS(teleportation_channel(DensityMatrix::maximally_mixed(9)), std::invalid_argument);
  CHECK_THROWS_AS(teleportation_channel(DensityMatrix::maximally_mixed(8)), std::invalid_argument);
}

TEST_CASE("decoherence_channel: endpoints") {
  const QuantumChannel none =
      decoherence_channel(Duration::zero(), Duration::microseconds(50), Duration::microseconds(70));
  CHECK(superop_distance(none, QuantumChannel::identity(2)) < 1e-12);

  const QuantumChannel forever =
      decoherence_channel(Duration::infinite(), Duration::microseconds(50), Duration::microseconds(70));
  Rng rng = make_rng(19);
  const DensityMatrix rho = random_density(2, rng);
  CHECK(max_abs(forever.apply(rho).matrix() - DensityMatrix::computational(2, 0).matrix()) < 1e-12);

  CHECK_THROWS_AS(
      decoherence_channel(Duration::zero(), Duration::microseconds(10), Duration::microseconds(21)),
      std::invalid_argument);
}

TEST_CASE("decoherence_channel: pure dephasing closed form") {
  const QuantumChannel deph = decoherence_channel(Duration::microseconds(39), Duration::infinite(),
                                                  Duration::milliseconds(12));
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const CMatrix out = deph.apply(DensityMatrix::pure(plus)).matrix();
  const double multiplier = std::exp(-39e-6 / 12e-3);
  CHECK(multiplier == doctest::Approx(0.99676).epsilon(1e-4));
  CHECK(out(0, 1).real() == doctest::Approx(0.5 * multiplier).epsilon(1e-12));
  CHECK(out(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("decoherence_channel: matches the Lindblad matrix-exponential oracle") {
  const Duration t = Duration::microseconds(30);
  const Duration t1 = Duration::microseconds(100);
  const Duration t2 = Duration::microseconds(150);

  CMatrix lower = CMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const CMatrix raise = lower.adjoint();
  const CMatrix number = raise * lower;
  const CMatrix id2 = identity_matrix(2);
  const double rate1 = 1.0 / t1.seconds();
  const double rate_phi = 0.5 * (1.0 / t2.seconds() - 0.5 / t1.seconds());

  CMatrix lindblad = rate1 * (kron(lower.conjugate(), lower) -
                              0.5 * (kron(id2, number) + kron(number.transpose(), id2)));
  lindblad += rate_phi * (kron(pauli_z().conjugate(), pauli_z()) - identity_matrix(4));
  const CMatrix expected = (lindblad * t.seconds()).exp();

  const QuantumChannel channel = decoherence_channel(t, t1, t2);
  CHECK(max_abs(channel.superop() - expected) < 1e-12);
  CHECK_NOTHROW(channel.validate());
}

TEST_CASE("representations: reshuffle is an involution consistent with Kraus forms") {
  Rng rng = make_rng(20);
  for (int i = 0; i < 10; ++i) {
    const QuantumChannel lambda = random_channel(2, rng);
    const CMatrix choi = lambda.choi();
    CHECK(max_abs(reshuffle_choi_superop(lambda.superop(), 2) - choi) < 1e-12);
    CHECK(max_abs(reshuffle_choi_superop(choi, 2) - lambda.superop()) < 1e-12);

    const QuantumChannel rebuilt = QuantumChannel::from_superop(lambda.superop());
    CHECK(superop_distance(rebuilt, lambda) < 1e-12);
    CHECK_NOTHROW(rebuilt.validate());
  }
}

TEST_CASE("adjoint_apply: Heisenberg picture matches trace duality") {
  Rng rng = make_rng(21);
  const QuantumChannel lambda = random_channel(2, rng);
  const DensityMatrix rho = random_density(2, rng);
  const CMatrix effect = hermitian_part(ginibre(2, 2, rng));
  const double state_side = (effect * lambda.apply_matrix(rho.matrix())).trace().real();
  const double effect_side = (lambda.adjoint_apply(effect) * rho.matrix()).trace().real();
  CHECK(state_side == doctest::Approx(effect_side).epsilon(1e-12));
}

TEST_CASE("validate: constructed channels pass CPTP checks, broken ones fail") {
  Rng rng = make_rng(22);
  for (int i = 0; i < 25; ++i) {
    CHECK_NOTHROW(random_channel(2, rng).validate());
  }
  // Trace-decreasing Kraus set.
  CHECK_THROWS_AS(QuantumChannel::from_kraus({0.5 * identity_matrix(2)}).validate(),
                  std::runtime_error);
}
