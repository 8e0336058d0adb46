#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lchzk/bits.hpp"
#include "lchzk/rng.hpp"

namespace lchzk {

// Pauli operator on n qubits in the symplectic representation
//
//   i^phase * (X^{x_0} Z^{z_0}) tensor ... tensor (X^{x_{n-1}} Z^{z_{n-1}})
//
// with Y stored as (x=1, z=1, phase=1), i.e. Y = i X Z.  Bits are packed
// into 64-bit words; bit q lives in word q/64.
struct PauliString {
  int n = 0;
  std::vector<uint64_t> x;
  std::vector<uint64_t> z;
  int phase = 0;  // power of i, reduced mod 4

  PauliString() = default;
  static PauliString identity(int n);
  // kind is one of 'X', 'Y', 'Z' acting on `qubit`, identity elsewhere.
  static PauliString single(int n, int qubit, char kind);

  bool x_bit(int q) const { return (x[q >> 6] >> (q & 63)) & 1; }
  bool z_bit(int q) const { return (z[q >> 6] >> (q & 63)) & 1; }
  void set_x(int q, bool v);
  void set_z(int q, bool v);

  bool commutes_with(const PauliString& other) const;
  bool is_identity_up_to_phase() const;
  bool operator==(const PauliString& other) const;

  // e.g. "-iXIZ"; single-qubit letter Y is printed for (x=1,z=1) with its
  // stored i absorbed into the leading phase.
  std::string str() const;

  nlohmann::json to_json() const;
  static PauliString from_json(const nlohmann::json& j);
};

// Exact group product p*q with full phase tracking.
PauliString pauli_multiply(const PauliString& p, const PauliString& q);

enum class GateKind : uint8_t { H, P, CNOT, X, Z };

struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;  // CNOT target; -1 for single-qubit gates
};

const char* gate_name(GateKind k);

// Circuit over the gate set {H, P, CNOT, X, Z}, applied left to right.
struct CliffordCircuit {
  int n = 0;
  std::vector<Gate> gates;

  CliffordCircuit() = default;
  explicit CliffordCircuit(int n_) : n(n_) {}

  CliffordCircuit& h(int q);
  CliffordCircuit& p(int q);
  CliffordCircuit& cnot(int control, int target);
  CliffordCircuit& x(int q);
  CliffordCircuit& z(int q);
  // controlled-Z built as H(t) CNOT(c,t) H(t)
  CliffordCircuit& cz(int a, int b);
  void append(const CliffordCircuit& other);

  // Inverse circuit: gates reversed, P replaced by PPP.
  CliffordCircuit inverse() const;
  // Entry-wise complex conjugate: P replaced by PPP, everything else fixed.
  CliffordCircuit conjugated() const;
  // Same gates re-indexed by qubit_map into a circuit on new_n qubits.
  CliffordCircuit remapped(int new_n, const std::vector<int>& qubit_map) const;

  void validate() const;

  nlohmann::json to_json() const;
  static CliffordCircuit from_json(const nlohmann::json& j);
};

// Conjugation q = c p c^dagger, phase exact.
PauliString conjugate_pauli(const CliffordCircuit& c, const PauliString& p);

// Conjugation by a single gate, in place.
void conjugate_by_gate(const Gate& g, PauliString& p);

// Images of the generators X_1..X_n, Z_1..Z_n under conjugation.
struct CliffordTableau {
  int n = 0;
  std::vector<PauliString> x_images;
  std::vector<PauliString> z_images;

  static CliffordTableau from_circuit(const CliffordCircuit& c);
  bool is_symplectic() const;
  bool operator==(const CliffordTableau& other) const;
  // Canonical string key, usable for counting distinct tableaus.
  std::string key() const;
};

// Random Clifford circuit sampled as a word of `length` uniformly random
// gates from {H, P, CNOT}.  Not Haar uniform, but long words mix over the
// full Clifford group (all 24 single-qubit tableaus show up quickly).
CliffordCircuit random_clifford(int k, Rng& rng, int length = 40);

}  // namespace lchzk
