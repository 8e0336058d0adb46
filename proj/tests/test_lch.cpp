#include <nlohmann/json.hpp>

#include "doctest.h"
#include "lchzk/lch.hpp"
#include "oracles.hpp"

using namespace lchzk;

namespace {

// 2-qubit circuit accepting |11> with certainty: two controlled-P gates,
// output is qubit 0.
VerificationCircuit lambda_p_pair() {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});
  v.gates.push_back({VerificationGate::Kind::LambdaP, 1, 0});
  return v;
}

}  // namespace

TEST_CASE("propagation gadget identities") {
  for (auto kind : {VerificationGate::Kind::LambdaP, VerificationGate::Kind::HH}) {
    auto circuits = decompose_propagation(kind);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(8, 8);
    std::vector<Eigen::MatrixXcd> projections;
    for (const CliffordCircuit& c : circuits) {
      Eigen::MatrixXcd u = dense_unitary(c);
      Eigen::VectorXcd vec = u.adjoint().col(0);
      Eigen::MatrixXcd proj = vec * vec.adjoint();
      CHECK(is_projection(proj, 1e-12));
      CHECK(std::abs(proj.trace().real() - 1.0) < 1e-12);  // rank 1
      projections.push_back(proj);
      sum += proj;
    }
    CHECK(oracles::matrices_close(sum, propagation_projector(kind), 1e-12));
    for (size_t i = 0; i < projections.size(); ++i)
      for (size_t j = i + 1; j < projections.size(); ++j)
        CHECK((projections[i] * projections[j]).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gadget preparations produce the stated vectors") {
  auto preps = propagation_preparations(VerificationGate::Kind::HH);
  const double half = 0.5;
  // rows of the table: amplitudes of |000>..|111> for psi_1..psi_4
  const double expected[4][8] = {
      {half, 0, 0, -half, 0, -half, -half, 0},
      {half, 0, 0, half, -half, 0, 0, -half},
      {0, half, -half, 0, 0, half, -half, 0},
      {0, half, half, 0, -half, 0, 0, half},
  };
  for (int i = 0; i < 4; ++i) {
    DenseState s(3);
    s.apply_circuit(preps[i]);
    for (int b = 0; b < 8; ++b) {
      CHECK(std::abs(s.amplitude(b).real() - expected[i][b]) < 1e-12);
      CHECK(std::abs(s.amplitude(b).imag()) < 1e-12);
    }
  }

  auto lp = propagation_preparations(VerificationGate::Kind::LambdaP);
  const double inv = 1.0 / std::sqrt(2.0);
  DenseState s0(3);
  s0.apply_circuit(lp[0]);  // |-> |00>
  CHECK(std::abs(s0.amplitude(0).real() - inv) < 1e-12);
  CHECK(std::abs(s0.amplitude(4).real() + inv) < 1e-12);
  DenseState s3(3);
  s3.apply_circuit(lp[3]);  // (|0> - i|1>)/sqrt2 (x) |11>
  CHECK(std::abs(s3.amplitude(3).real() - inv) < 1e-12);
  CHECK(std::abs(s3.amplitude(7).imag() + inv) < 1e-12);
}

TEST_CASE("compiled instance matches the clock-register oracle") {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});

  LchInstance inst = compile(v, 10);
  // T = 1: 4 propagation terms, output check, 1 clock pair, clock sentinel
  int prop_terms = 0;
  for (const auto& t : inst.terms)
    if (t.k() >= 4) ++prop_terms;
  CHECK(prop_terms == 4);
  CHECK(inst.m() == 7);
  CHECK(inst.n == 4);

  Eigen::MatrixXcd h = total_hamiltonian(inst);
  Eigen::MatrixXcd oracle = oracles::clock_hamiltonian_oracle(v);
  CHECK(oracles::matrices_close(h, oracle, 1e-12));

  for (const auto& t : inst.terms) CHECK(is_projection(t.local_projection(), 1e-12));
}

TEST_CASE("two-gate circuit agrees with the oracle and has a low-energy witness") {
  VerificationCircuit v = lambda_p_pair();
  LchInstance inst = compile(v, 10);
  CHECK(oracles::matrices_close(total_hamiltonian(inst), oracles::clock_hamiltonian_oracle(v), 1e-12));
  CHECK(inst.measured_ground_energy.has_value());

  // |11> passes the circuit with certainty, so the ground energy is tiny.
  CHECK(ground_energy(inst) <= std::pow(2.0, -10));

  DenseState witness = DenseState::basis(2, bitstring_from("11"));
  DenseState hist = history_state(v, witness);
  CHECK(energy(inst, hist) < 1e-10);

  // the history state clears every individual term
  Eigen::MatrixXcd rho = hist.density();
  for (int j = 0; j < inst.m(); ++j) {
    Eigen::MatrixXcd reduced = partial_trace(rho, inst.n, inst.terms[j].support);
    double accept = 1.0 - (inst.terms[j].local_projection() * reduced).trace().real();
    CHECK(accept >= 1.0 - std::pow(2.0, -10));
  }
}

TEST_CASE("empty circuit compiles to penalty terms only") {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 1;  // qubit 1 is an ancilla
  v.output_qubit = 0;
  LchInstance inst = compile(v, 10);
  for (const auto& t : inst.terms) CHECK(t.k() <= 2);
  CHECK((long{1} << inst.p) > inst.q);

  // output == witness qubit: |1> accepts immediately
  DenseState witness = DenseState::basis(1, bitstring_from("1"));
  DenseState hist = history_state(v, witness);
  CHECK(energy(inst, hist) < 1e-12);
  CHECK(ground_energy(inst) < 1e-12);
}

TEST_CASE("always-rejecting circuit has bulk ground energy") {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 1;
  v.output_qubit = 1;  // ancilla as output: always 0
  LchInstance inst = compile(v, 4);
  double gap = ground_energy(inst);
  CHECK(gap > 0.1);  // measured, not a tight claim
  double bound = 1.0 / (2.0 * (v.T() + 1) * (v.T() + 1) * (v.T() + 1));
  CHECK(gap > bound / inst.m());
}

TEST_CASE("history state structure") {
  // T = 0: witness (x) ancillas (x) clock zero
  VerificationCircuit v0;
  v0.n_qubits = 2;
  v0.witness_qubits = 1;
  v0.output_qubit = 0;
  DenseState w = DenseState::basis(1, bitstring_from("1"));
  DenseState h0 = history_state(v0, w);
  CHECK(h0.n() == 3);
  CHECK(std::abs(h0.amplitude(0b100) - cx{1.0, 0.0}) < 1e-12);

  // T = 1 controlled-P on witness |11>: (|11>|c0> + i|11>|c1>)/sqrt2 with
  // clock(0) = 00 and clock(1) = 10 on two clock qubits.
  VerificationCircuit v1;
  v1.n_qubits = 2;
  v1.witness_qubits = 2;
  v1.output_qubit = 0;
  v1.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});
  DenseState w11 = DenseState::basis(2, bitstring_from("11"));
  DenseState h1 = history_state(v1, w11);
  const double inv = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(h1.amplitude(0b1100) - cx{inv, 0.0}) < 1e-12);
  CHECK(std::abs(h1.amplitude(0b1110) - cx{0.0, inv}) < 1e-12);
}

TEST_CASE("history-state energy equals the rejection rate over T+1") {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});
  LchInstance inst = compile(v, 10);

  // witness |+>|1>: the output qubit reads 1 with probability 1/2
  DenseState w(2);
  w.apply_h(0);
  w.apply_x(1);
  DenseState hist = history_state(v, w);
  double reject = 0.5;
  double expected = reject / (v.T() + 1);
  CHECK(std::abs(energy(inst, hist) - expected) < 1e-9);
  CHECK(std::abs(energy(inst, hist.density()) - expected) < 1e-9);
}

TEST_CASE("single-term energies") {
  LchInstance inst;
  inst.n = 2;
  inst.p = 4;
  inst.q = 1;
  LchTerm term;
  term.clifford = CliffordCircuit(1);
  term.support = {1};
  inst.terms.push_back(term);  // |0><0| on qubit 1

  DenseState one(2);
  one.apply_x(1);
  CHECK(std::abs(energy(inst, one)) < 1e-12);

  DenseState plus(2);
  plus.apply_h(1);
  CHECK(std::abs(energy(inst, plus) - 0.5) < 1e-12);
}

TEST_CASE("instance serialization round trip") {
  VerificationCircuit v = lambda_p_pair();
  LchInstance inst = compile(v, 10);
  nlohmann::json j = inst.to_json();
  LchInstance back = LchInstance::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.m() == inst.m());
  CHECK(oracles::matrices_close(total_hamiltonian(back), total_hamiltonian(inst), 1e-14));

  nlohmann::json cj = v.to_json();
  CHECK(VerificationCircuit::from_json(cj).to_json() == cj);
}

TEST_CASE("invalid instances are rejected") {
  LchInstance inst;
  inst.n = 1;
  inst.p = 2;
  inst.q = 9;  // 2^p <= q
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::HH, 0, 0});
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
}
