#include "doctest.h"
#include "lchzk/steane.hpp"
#include "lchzk/tableau.hpp"
#include "oracles.hpp"

using namespace lchzk;

namespace {

// Encode `logical_qubits` logical qubits block-major and return the state.
StabilizerState encode_blocks(const StabilizerState& logical, const SteaneCode& code) {
  const int n = logical.n();
  const long N = code.N();
  std::vector<int> leaders(n);
  for (int i = 0; i < n; ++i) leaders[i] = static_cast<int>(i * N);
  StabilizerState out = StabilizerState::embed(logical, static_cast<int>(n * N), leaders);
  CliffordCircuit enc = code.encoder_circuit();
  for (int i = 0; i < n; ++i) {
    std::vector<int> map(N);
    for (long w = 0; w < N; ++w) map[w] = static_cast<int>(i * N + w);
    out.apply_circuit(enc.remapped(static_cast<int>(n * N), map));
  }
  return out;
}

void apply_transversal(StabilizerState& s, const CliffordCircuit& c, long N) {
  for (long j = 0; j < N; ++j) {
    std::vector<int> map(c.n);
    for (int q = 0; q < c.n; ++q) map[q] = static_cast<int>(q * N + j);
    s.apply_circuit(c.remapped(s.n(), map));
  }
}

}  // namespace

TEST_CASE("codeword membership and decoding") {
  SteaneCode code(1);
  CHECK(code.logical_decode(bitstring_from("0001111")) == 0);
  CHECK(code.logical_decode(bitstring_from("1111111")) == 1);
  CHECK_FALSE(code.is_codeword(bitstring_from("1000000")));
  CHECK_THROWS_AS(code.logical_decode(bitstring_from("101")), std::invalid_argument);
}

TEST_CASE("base codeword lists have the expected structure") {
  // parity split
  for (const BitString& w : SteaneCode::base_words(0)) CHECK(parity(w) == 0);
  for (const BitString& w : SteaneCode::base_words(1)) CHECK(parity(w) == 1);

  // the two classes are cosets of each other: w + D0 == D1 for any w in D1
  const BitString& shift = SteaneCode::base_words(1)[3];
  for (const BitString& w : SteaneCode::base_words(0)) {
    BitString moved = bitstring_xor(w, shift);
    bool found = false;
    for (const BitString& v : SteaneCode::base_words(1)) found |= (v == moved);
    CHECK(found);
  }
}

TEST_CASE("minimum weight") {
  SteaneCode c1(1);
  CHECK(c1.min_distance() == 3);
  CHECK(c1.min_weight() == 3);
  SteaneCode c2(2);
  CHECK(c2.min_distance() == 9);
  CHECK(c2.min_weight() == 9);
  CHECK(hamming_weight(bitstring_from("0001111")) == 4);
  CHECK(hamming_weight(bitstring_from("0010110")) == 3);
}

TEST_CASE("encoder support equals the codeword lists at level 1") {
  SteaneCode code(1);
  for (int b = 0; b < 2; ++b) {
    StabilizerState logical(1);
    if (b) logical.apply_x(0);
    StabilizerState enc = encode_blocks(logical, code);
    auto dist = enc.measurement_distribution();
    CHECK(dist.size() == 8);
    for (const BitString& w : SteaneCode::base_words(b)) {
      auto it = dist.find(bitstring_str(w));
      REQUIRE(it != dist.end());
      CHECK(std::abs(it->second - 0.125) < 1e-12);
    }
  }
}

TEST_CASE("level-2 encoder output decodes recursively") {
  SteaneCode code(2);
  StabilizerState logical(1);
  StabilizerState enc = encode_blocks(logical, code);
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    StabilizerState copy = enc;
    BitString y = copy.measure_all(rng);
    CHECK(code.logical_decode(y) == 0);
    CHECK(parity(y) == 0);
  }
}

TEST_CASE("codeword sampling") {
  SteaneCode code(1);
  Rng rng(5);
  std::map<std::string, long> counts;
  const long total = 10000;
  for (long i = 0; i < total; ++i) counts[bitstring_str(code.sample_codeword(0, rng))]++;
  std::map<std::string, double> expected;
  for (const BitString& w : SteaneCode::base_words(0)) expected[bitstring_str(w)] = 0.125;
  CHECK(oracles::chi2_statistic(counts, expected, total) < oracles::chi2_critical_99(7));

  Rng ra(9), rb(9);
  CHECK(code.sample_codeword(1, ra) == code.sample_codeword(1, rb));

  SteaneCode big(2);
  Rng rng2(6);
  for (int i = 0; i < 200; ++i) {
    BitString y = big.sample_codeword(1, rng2);
    CHECK(big.logical_decode(y) == 1);
    CHECK(parity(y) == 1);
  }
}

TEST_CASE("transversal Clifford action commutes with encoding") {
  for (int t = 1; t <= 2; ++t) {
    SteaneCode code(t);
    const long N = code.N();
    const bool conjugate = (t % 2 == 1);

    // single-qubit gates H and P on a few stabilizer inputs
    for (int gate = 0; gate < 2; ++gate) {
      CliffordCircuit logical_gate(1);
      if (gate == 0)
        logical_gate.h(0);
      else
        logical_gate.p(0);
      CliffordCircuit physical_gate = conjugate ? logical_gate.conjugated() : logical_gate;

      for (int input = 0; input < 3; ++input) {
        StabilizerState logical(1);
        if (input == 1) logical.apply_h(0);
        if (input == 2) {
          logical.apply_h(0);
          logical.apply_p(0);
        }

        StabilizerState route_a = logical;
        route_a.apply_circuit(logical_gate);
        StabilizerState encoded_then = encode_blocks(route_a, code);

        StabilizerState route_b = encode_blocks(logical, code);
        apply_transversal(route_b, physical_gate, N);

        CHECK(encoded_then.same_state(route_b));
      }
    }

    // CNOT on two logical qubits
    CliffordCircuit cnot(2);
    cnot.cnot(0, 1);
    for (int input = 0; input < 3; ++input) {
      StabilizerState logical(2);
      if (input == 1) logical.apply_h(0);
      if (input == 2) {
        logical.apply_h(0);
        logical.apply_cnot(0, 1);
      }
      StabilizerState route_a = logical;
      route_a.apply_circuit(cnot);
      StabilizerState encoded_then = encode_blocks(route_a, code);

      StabilizerState route_b = encode_blocks(logical, code);
      apply_transversal(route_b, cnot, N);

      CHECK(encoded_then.same_state(route_b));
    }
  }
}
