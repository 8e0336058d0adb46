#pragma once

#include <Eigen/Dense>
#include <array>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

#include "lchzk/dense.hpp"
#include "lchzk/pauli.hpp"

namespace lchzk {

// Measurement circuit over the two-gate set used by the reduction.
struct VerificationGate {
  enum class Kind { LambdaP, HH };
  Kind kind;
  int q0 = 0;
  int q1 = 0;
};

struct VerificationCircuit {
  int n_qubits = 0;        // data qubits: witness first, then ancillas (|0> inputs)
  int witness_qubits = 0;
  int output_qubit = 0;    // acceptance = this qubit measures 1
  std::vector<VerificationGate> gates;

  int ancilla_qubits() const { return n_qubits - witness_qubits; }
  int T() const { return static_cast<int>(gates.size()); }
  void validate() const;

  nlohmann::json to_json() const;
  static VerificationCircuit from_json(const nlohmann::json& j);
};

// One Hamiltonian term: the rank-1 projection C^dagger |0^k><0^k| C applied
// to the listed qubits (wire w of the circuit acts on support[w]).
struct LchTerm {
  CliffordCircuit clifford;
  std::vector<int> support;

  int k() const { return static_cast<int>(support.size()); }
  Eigen::MatrixXcd local_projection() const;
  // Term whose projection is prep |0..0><0..0| prep^dagger.
  static LchTerm from_preparation(const CliffordCircuit& prep, std::vector<int> support);
  void validate(int n) const;

  nlohmann::json to_json() const;
  static LchTerm from_json(const nlohmann::json& j);
};

struct LchInstance {
  int n = 0;
  int k = 5;
  int p = 0;
  long q = 0;
  std::vector<LchTerm> terms;
  std::optional<double> measured_ground_energy;  // metadata, not part of the problem

  int m() const { return static_cast<int>(terms.size()); }
  void validate() const;  // 2^p > q, supports in range, arity <= k

  nlohmann::json to_json() const;
  static LchInstance from_json(const nlohmann::json& j);
};

// The four Clifford circuits C_1..C_4 on 3 qubits whose projections
// C_i^dagger |000><000| C_i sum to
//   (1/2) [ I (x) I  -  |1><0| (x) U  -  |0><1| (x) U^dagger ],
// wire 0 carrying the |1><0| factor and wires 1,2 carrying U.
std::array<CliffordCircuit, 4> decompose_propagation(VerificationGate::Kind kind);
// State-preparation form of the same circuits: prep_i |000> is the i-th
// projection's unit vector (C_i = prep_i^{-1}).
std::array<CliffordCircuit, 4> propagation_preparations(VerificationGate::Kind kind);
// Dense 8x8 target of the identity above.
Eigen::MatrixXcd propagation_projector(VerificationGate::Kind kind);

// Clock-register reduction from a verification circuit to an instance with
// terms of arity at most 5.  Clock value t is stored in unary, 1^t 0^{T+1-t},
// on T+1 qubits appended after the data qubits.  q is set to 2(T+1)^3 m.
LchInstance compile(const VerificationCircuit& v, int p, int record_gap_up_to = 9);

// (T+1)^{-1/2} sum_t U_t...U_1 (|witness>|0^anc>) (x) |1^t 0^{T+1-t}>.
DenseState history_state(const VerificationCircuit& v, const DenseState& witness,
                         int cap = DenseState::kDefaultCap);

double energy(const LchInstance& inst, const Eigen::MatrixXcd& rho);
double energy(const LchInstance& inst, const DenseState& state);
Eigen::MatrixXcd total_hamiltonian(const LchInstance& inst, int cap = 12);
double ground_energy(const LchInstance& inst, int cap = 12);

}  // namespace lchzk
