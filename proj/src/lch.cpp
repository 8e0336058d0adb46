#include "lchzk/lch.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace lchzk {

void VerificationCircuit::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("verification circuit needs qubits");
  if (witness_qubits < 0 || witness_qubits > n_qubits)
    throw std::invalid_argument("witness count out of range");
  if (output_qubit < 0 || output_qubit >= n_qubits)
    throw std::invalid_argument("output qubit out of range");
  for (const auto& g : gates) {
    if (g.q0 < 0 || g.q0 >= n_qubits || g.q1 < 0 || g.q1 >= n_qubits)
      throw std::invalid_argument("gate qubit out of range");
    if (g.q0 == g.q1) throw std::invalid_argument("gate qubits must be distinct");
  }
}

Eigen::MatrixXcd LchTerm::local_projection() const {
  Eigen::MatrixXcd u = dense_unitary(clifford);
  Eigen::VectorXcd v = u.adjoint().col(0);
  return v * v.adjoint();
}

LchTerm LchTerm::from_preparation(const CliffordCircuit& prep, std::vector<int> support) {
  LchTerm t;
  t.clifford = prep.inverse();
  t.support = std::move(support);
  return t;
}

void LchTerm::validate(int n) const {
  clifford.validate();
  if (clifford.n != k()) throw std::invalid_argument("term circuit width must match support size");
  std::vector<bool> seen(n, false);
  for (int s : support) {
    if (s < 0 || s >= n) throw std::invalid_argument("term support index out of range");
    if (seen[s]) throw std::invalid_argument("term support indices must be distinct");
    seen[s] = true;
  }
}

void LchInstance::validate() const {
  if (n < 1) throw std::invalid_argument("instance needs qubits");
  if (p < 1 || q < 1) throw std::invalid_argument("instance parameters must be positive");
  if (p < 63 && (long{1} << p) <= q)
    throw std::invalid_argument("instance requires 2^p > q");
  for (const auto& t : terms) {
    t.validate(n);
    if (t.k() > k) throw std::invalid_argument("term arity exceeds declared locality");
  }
}

// --- propagation gadgets ---------------------------------------------------

std::array<CliffordCircuit, 4> propagation_preparations(VerificationGate::Kind kind) {
  std::array<CliffordCircuit, 4> prep{CliffordCircuit(3), CliffordCircuit(3), CliffordCircuit(3),
                                      CliffordCircuit(3)};
  if (kind == VerificationGate::Kind::LambdaP) {
    prep[0].h(0).z(0);                      // |-> |00>
    prep[1].h(0).z(0).x(2);                 // |-> |01>
    prep[2].h(0).z(0).x(1);                 // |-> |10>
    prep[3].h(0).p(0).p(0).p(0).x(1).x(2);  // (|0> - i|1>)/sqrt2 (x) |11>
  } else {
    prep[0].h(0).h(1).cnot(0, 2).cnot(1, 2).cz(1, 2).z(0);
    prep[1].h(0).h(1).z(0).cnot(1, 2);
    prep[2].h(0).h(1).x(2).cnot(1, 2).z(1);
    prep[3].h(0).h(1).x(2).cnot(0, 2).cnot(1, 2).cz(1, 2).z(0);
  }
  return prep;
}

std::array<CliffordCircuit, 4> decompose_propagation(VerificationGate::Kind kind) {
  std::array<CliffordCircuit, 4> out{CliffordCircuit(3), CliffordCircuit(3), CliffordCircuit(3),
                                     CliffordCircuit(3)};
  auto preps = propagation_preparations(kind);
  for (int i = 0; i < 4; ++i) out[i] = preps[i].inverse();
  return out;
}

Eigen::MatrixXcd propagation_projector(VerificationGate::Kind kind) {
  Eigen::MatrixXcd u =
      kind == VerificationGate::Kind::LambdaP ? lambda_p_matrix() : hh_matrix();
  Eigen::MatrixXcd flip01 = Eigen::MatrixXcd::Zero(2, 2);  // |1><0|
  flip01(1, 0) = 1.0;
  Eigen::MatrixXcd eye8 = Eigen::MatrixXcd::Identity(8, 8);
  return 0.5 * (eye8 - kron(flip01, u) - kron(flip01.adjoint(), u.adjoint()));
}

// --- compiler ---------------------------------------------------------------

namespace {

// Standard-basis pattern projector |w><w| as a term: C = X^w.
LchTerm pattern_term(const BitString& w, std::vector<int> support) {
  CliffordCircuit prep(static_cast<int>(w.size()));
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i]) prep.x(static_cast<int>(i));
  return LchTerm::from_preparation(prep, std::move(support));
}

}  // namespace

LchInstance compile(const VerificationCircuit& v, int p, int record_gap_up_to) {
  v.validate();
  const int T = v.T();
  const int n_data = v.n_qubits;
  const int n_total = n_data + T + 1;
  auto clock = [&](int ell) {  // clock qubit ell, 1-based, ell in 1..T+1
    return n_data + ell - 1;
  };

  LchInstance inst;
  inst.n = n_total;
  inst.k = 5;
  inst.p = p;

  // Input check: each ancilla must be 0 at clock value 0 (clock qubit 1 = 0).
  for (int a = v.witness_qubits; a < n_data; ++a)
    inst.terms.push_back(pattern_term(bitstring_from("10"), {a, clock(1)}));

  // Output check: output must read 1 at clock value T.
  if (T >= 1)
    inst.terms.push_back(pattern_term(bitstring_from("01"), {v.output_qubit, clock(T)}));
  else
    inst.terms.push_back(pattern_term(bitstring_from("00"), {v.output_qubit, clock(1)}));

  // Clock validity: forbid 01 on adjacent clock qubits, pin the sentinel
  // qubit T+1 to 0.
  for (int ell = 1; ell <= T; ++ell)
    inst.terms.push_back(pattern_term(bitstring_from("01"), {clock(ell), clock(ell + 1)}));
  inst.terms.push_back(pattern_term(bitstring_from("1"), {clock(T + 1)}));

  // Propagation: four rank-1 terms per gate, each the gadget projection
  // guarded by the clock window around step t.
  for (int t = 1; t <= T; ++t) {
    const VerificationGate& g = v.gates[t - 1];
    auto preps = propagation_preparations(g.kind);
    for (const CliffordCircuit& gp : preps) {
      if (t >= 2) {
        // |10><10| on clock qubits (t-1, t+1), gadget on (clock t, data).
        CliffordCircuit prep(5);
        prep.x(0);
        prep.append(gp.remapped(5, {2, 3, 4}));
        inst.terms.push_back(
            LchTerm::from_preparation(prep, {clock(t - 1), clock(t + 1), clock(t), g.q0, g.q1}));
      } else {
        // Boundary step: |0><0| on clock qubit 2, gadget on (clock 1, data).
        CliffordCircuit prep(4);
        prep.append(gp.remapped(4, {1, 2, 3}));
        inst.terms.push_back(LchTerm::from_preparation(prep, {clock(2), clock(1), g.q0, g.q1}));
      }
    }
  }

  const long m = inst.m();
  inst.q = 2 * static_cast<long>(T + 1) * (T + 1) * (T + 1) * m;
  inst.validate();

  if (n_total <= record_gap_up_to) inst.measured_ground_energy = ground_energy(inst, record_gap_up_to);
  return inst;
}

DenseState history_state(const VerificationCircuit& v, const DenseState& witness, int cap) {
  v.validate();
  if (witness.n() != v.witness_qubits) throw std::invalid_argument("witness width mismatch");
  const int T = v.T();
  const int n_data = v.n_qubits;
  const int n_total = n_data + T + 1;
  if (n_total > cap) throw std::invalid_argument("history state exceeds qubit cap");

  DenseState data = witness;
  if (v.ancilla_qubits() > 0) data = witness.tensor(DenseState(v.ancilla_qubits()));

  DenseState out(n_total, cap);
  std::fill(out.amplitudes().begin(), out.amplitudes().end(), cx{0.0, 0.0});
  const double w = 1.0 / std::sqrt(static_cast<double>(T + 1));

  auto add_slice = [&](const DenseState& d, int t) {
    uint64_t clock_bits = 0;
    for (int ell = 1; ell <= t; ++ell) clock_bits |= uint64_t{1} << (T + 1 - ell);
    for (uint64_t i = 0; i < d.amplitudes().size(); ++i)
      out.amplitudes()[(i << (T + 1)) | clock_bits] += w * d.amplitudes()[i];
  };

  add_slice(data, 0);
  for (int t = 1; t <= T; ++t) {
    const VerificationGate& g = v.gates[t - 1];
    if (g.kind == VerificationGate::Kind::LambdaP)
      data.apply_controlled_p(g.q0, g.q1);
    else {
      data.apply_h(g.q0);
      data.apply_h(g.q1);
    }
    add_slice(data, t);
  }
  return out;
}

double energy(const LchInstance& inst, const Eigen::MatrixXcd& rho) {
  const uint64_t dim = uint64_t{1} << inst.n;
  if (rho.rows() != static_cast<Eigen::Index>(dim)) throw std::invalid_argument("state dimension mismatch");
  double total = 0.0;
  for (const LchTerm& t : inst.terms) {
    Eigen::MatrixXcd reduced = partial_trace(rho, inst.n, t.support);
    total += (t.local_projection() * reduced).trace().real();
  }
  return total;
}

double energy(const LchInstance& inst, const DenseState& state) {
  if (state.n() != inst.n) throw std::invalid_argument("state width mismatch");
  double total = 0.0;
  for (const LchTerm& t : inst.terms) {
    Eigen::MatrixXcd reduced = state.reduced_density(t.support);
    total += (t.local_projection() * reduced).trace().real();
  }
  return total;
}

Eigen::MatrixXcd total_hamiltonian(const LchInstance& inst, int cap) {
  if (inst.n > cap) throw std::invalid_argument("total Hamiltonian exceeds qubit cap");
  const uint64_t dim = uint64_t{1} << inst.n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const LchTerm& t : inst.terms) h += embed_operator(t.local_projection(), t.support, inst.n);
  return h;
}

double ground_energy(const LchInstance& inst, int cap) {
  return min_eigenvalue(total_hamiltonian(inst, cap));
}

// --- serialization -----------------------------------------------------------

nlohmann::json VerificationCircuit::to_json() const {
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& g : gates)
    gs.push_back({g.kind == VerificationGate::Kind::LambdaP ? "LambdaP" : "HH", g.q0, g.q1});
  return nlohmann::json{
      {"qubits", n_qubits}, {"witness", witness_qubits}, {"output", output_qubit}, {"gates", gs}};
}

VerificationCircuit VerificationCircuit::from_json(const nlohmann::json& j) {
  VerificationCircuit v;
  v.n_qubits = j.at("qubits").get<int>();
  v.witness_qubits = j.at("witness").get<int>();
  v.output_qubit = j.at("output").get<int>();
  for (const auto& e : j.at("gates")) {
    std::string name = e.at(0).get<std::string>();
    VerificationGate g;
    if (name == "LambdaP")
      g.kind = VerificationGate::Kind::LambdaP;
    else if (name == "HH")
      g.kind = VerificationGate::Kind::HH;
    else
      throw std::invalid_argument("unknown verification gate: " + name);
    g.q0 = e.at(1).get<int>();
    g.q1 = e.at(2).get<int>();
    v.gates.push_back(g);
  }
  v.validate();
  return v;
}

nlohmann::json LchTerm::to_json() const {
  return nlohmann::json{{"support", support}, {"clifford", clifford.to_json()}};
}

LchTerm LchTerm::from_json(const nlohmann::json& j) {
  LchTerm t;
  t.support = j.at("support").get<std::vector<int>>();
  t.clifford = CliffordCircuit::from_json(j.at("clifford"));
  return t;
}

nlohmann::json LchInstance::to_json() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : terms) ts.push_back(t.to_json());
  nlohmann::json j{{"n", n}, {"k", k}, {"p", p}, {"q", q}, {"terms", ts}};
  if (measured_ground_energy) j["metadata"] = {{"ground_energy", *measured_ground_energy}};
  return j;
}

LchInstance LchInstance::from_json(const nlohmann::json& j) {
  LchInstance inst;
  inst.n = j.at("n").get<int>();
  inst.k = j.at("k").get<int>();
  inst.p = j.at("p").get<int>();
  inst.q = j.at("q").get<long>();
  for (const auto& e : j.at("terms")) inst.terms.push_back(LchTerm::from_json(e));
  if (j.contains("metadata") && j["metadata"].contains("ground_energy"))
    inst.measured_ground_energy = j["metadata"]["ground_energy"].get<double>();
  inst.validate();
  return inst;
}

}  // namespace lchzk
