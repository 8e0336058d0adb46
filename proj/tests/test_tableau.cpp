#include <map>

#include "doctest.h"
#include "lchzk/dense.hpp"
#include "lchzk/pauli.hpp"
#include "lchzk/tableau.hpp"
#include "oracles.hpp"

using namespace lchzk;

TEST_CASE("basic circuit application") {
  StabilizerState s(1);
  s.apply_h(0);
  auto rows = s.canonical_stabilizers();
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == PauliString::single(1, 0, 'X'));

  StabilizerState bell(2);
  bell.apply_h(0);
  bell.apply_cnot(0, 1);
  auto gens = bell.canonical_stabilizers();
  REQUIRE(gens.size() == 2);
  PauliString xx = pauli_multiply(PauliString::single(2, 0, 'X'), PauliString::single(2, 1, 'X'));
  PauliString zz = pauli_multiply(PauliString::single(2, 0, 'Z'), PauliString::single(2, 1, 'Z'));
  CHECK(bell.pauli_expectation(xx) == 1);
  CHECK(bell.pauli_expectation(zz) == 1);

  StabilizerState id(1);
  CliffordCircuit empty(1);
  StabilizerState id2 = id;
  id2.apply_circuit(empty);
  CHECK(id.same_state(id2));
}

TEST_CASE("measurement basics") {
  Rng rng(3);
  StabilizerState zero(1);
  CHECK(zero.z_is_deterministic(0));
  CHECK(zero.measure_z(0, rng) == 0);

  // H|0> measured: close to uniform over 10^4 seeded samples
  std::map<std::string, long> counts;
  for (int i = 0; i < 10000; ++i) {
    StabilizerState s(1);
    s.apply_h(0);
    counts[s.measure_z(0, rng) ? "1" : "0"]++;
  }
  double stat = oracles::chi2_statistic(counts, {{"0", 0.5}, {"1", 0.5}}, 10000);
  CHECK(stat < oracles::chi2_critical_99(1));

  CHECK_THROWS_AS(zero.measure_z(5, rng), std::out_of_range);
}

TEST_CASE("post-measurement state follows the collapse rule") {
  Rng rng(9);
  StabilizerState s(2);
  s.apply_h(0);
  s.apply_cnot(0, 1);
  int first = s.measure_z(0, rng);
  CHECK(s.z_is_deterministic(1));
  CHECK(s.measure_z(1, rng) == first);  // Bell correlations
}

TEST_CASE("full measurement distribution matches the dense simulator") {
  Rng rng(0xBEEF);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng.below(4));
    CliffordCircuit c = random_clifford(n, rng, 30);
    StabilizerState s(n);
    s.apply_circuit(c);
    auto dist = s.measurement_distribution();

    DenseState d(n);
    d.apply_circuit(c);
    auto probs = d.z_probabilities();
    double total = 0.0;
    for (uint64_t idx = 0; idx < probs.size(); ++idx) {
      std::string key = bitstring_str(bitstring_of_value(idx, n));
      auto it = dist.find(key);
      double tab = it == dist.end() ? 0.0 : it->second;
      // stabilizer probabilities are dyadic, so the comparison is exact up
      // to dense rounding noise
      CHECK(std::abs(tab - probs[idx]) < 1e-12);
      total += tab;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("sampled measurements agree with the enumerated distribution") {
  Rng rng(21);
  CliffordCircuit c = random_clifford(3, rng, 25);
  StabilizerState base(3);
  base.apply_circuit(c);
  auto dist = base.measurement_distribution();

  std::map<std::string, long> counts;
  const long total = 20000;
  for (long i = 0; i < total; ++i) {
    StabilizerState s = base;
    counts[bitstring_str(s.measure_all(rng))]++;
  }
  std::map<std::string, double> expected(dist.begin(), dist.end());
  double stat = oracles::chi2_statistic(counts, expected, total);
  CHECK(stat < oracles::chi2_critical_99(static_cast<int>(expected.size()) - 1));
}

TEST_CASE("canonical form identifies equal states") {
  // |0> then H twice is |0> again
  StabilizerState a(2);
  a.apply_h(0);
  a.apply_h(0);
  CHECK(a.same_state(StabilizerState(2)));

  // GHZ built two different ways
  StabilizerState g1(3), g2(3);
  g1.apply_h(0);
  g1.apply_cnot(0, 1);
  g1.apply_cnot(1, 2);
  g2.apply_h(2);
  g2.apply_cnot(2, 1);
  g2.apply_cnot(1, 0);
  CHECK(g1.same_state(g2));
  g2.apply_z(0);
  CHECK_FALSE(g1.same_state(g2));
}

TEST_CASE("embed and permute agree with dense computation") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    CliffordCircuit c = random_clifford(2, rng, 15);
    StabilizerState small(2);
    small.apply_circuit(c);
    StabilizerState big = StabilizerState::embed(small, 4, {2, 0});

    DenseState dsmall(2);
    dsmall.apply_circuit(c);
    DenseState dbig = dsmall.tensor(DenseState(2));
    dbig.permute_qubits({2, 0, 1, 3});

    auto dist = big.measurement_distribution();
    auto probs = dbig.z_probabilities();
    for (uint64_t idx = 0; idx < probs.size(); ++idx) {
      std::string key = bitstring_str(bitstring_of_value(idx, 4));
      auto it = dist.find(key);
      double tab = it == dist.end() ? 0.0 : it->second;
      CHECK(std::abs(tab - probs[idx]) < 1e-12);
    }
  }
}

TEST_CASE("pauli expectations and reduced densities") {
  StabilizerState bell(2);
  bell.apply_h(0);
  bell.apply_cnot(0, 1);
  CHECK(bell.pauli_expectation(PauliString::single(2, 0, 'Z')) == 0);
  Eigen::MatrixXcd rho0 = bell.reduced_density({0});
  CHECK(oracles::matrices_close(rho0, 0.5 * Eigen::MatrixXcd::Identity(2, 2), 1e-12));

  Rng rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    CliffordCircuit c = random_clifford(3, rng, 20);
    StabilizerState s(3);
    s.apply_circuit(c);
    DenseState d(3);
    d.apply_circuit(c);
    CHECK(oracles::matrices_close(s.reduced_density({1, 2}), d.reduced_density({1, 2}), 1e-10));
  }
}
