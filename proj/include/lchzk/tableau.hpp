#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lchzk/bits.hpp"
#include "lchzk/pauli.hpp"
#include "lchzk/rng.hpp"

namespace lchzk {

// CHP-style stabilizer simulator: rows 0..n-1 are destabilizers, n..2n-1
// stabilizers; bit columns packed into 64-bit words, sign bit per row.
// Gate cost is O(n/64) words, measurement O(n^2/64).
class StabilizerState {
 public:
  explicit StabilizerState(int n);  // |0...0>

  int n() const { return n_; }

  void apply_h(int q);
  void apply_p(int q);
  void apply_cnot(int control, int target);
  void apply_x(int q);
  void apply_z(int q);
  void apply_gate(const Gate& g);
  void apply_circuit(const CliffordCircuit& c);

  // Standard-basis measurement of one qubit; collapses the state.
  int measure_z(int q, Rng& rng);
  // True when the next measure_z(q) has a deterministic outcome.
  bool z_is_deterministic(int q) const;
  BitString measure_all(Rng& rng);

  // Exact outcome distribution of measuring all qubits, as dyadic
  // probabilities.  Enumerates the branch tree; refuses to expand beyond
  // max_support outcomes.
  std::map<std::string, double> measurement_distribution(size_t max_support = (1u << 20)) const;

  // Embed an m-qubit state into n_total qubits at the listed positions;
  // remaining qubits are |0>.
  static StabilizerState embed(const StabilizerState& s, int n_total, const std::vector<int>& positions);
  // Relabel qubits: new index mapping[q] holds old qubit q.
  void permute_qubits(const std::vector<int>& mapping);

  std::vector<PauliString> stabilizer_generators() const;
  // Unique generating set (row-reduced echelon form over x then z columns,
  // fully eliminated, signs tracked exactly).  Equal groups give equal lists.
  std::vector<PauliString> canonical_stabilizers() const;
  bool same_state(const StabilizerState& other) const;

  // <P> for a Pauli observable: +1/-1 when +-P stabilizes the state, else 0.
  int pauli_expectation(const PauliString& p) const;
  // Reduced density operator on the listed qubits via Pauli expectations.
  Eigen::MatrixXcd reduced_density(const std::vector<int>& keep) const;

 private:
  int n_;
  int words_;
  // row-major packed bits; row r's words at [r*words_, (r+1)*words_)
  std::vector<uint64_t> x_;
  std::vector<uint64_t> z_;
  std::vector<uint8_t> r_;  // sign bit per row (0 -> +, 1 -> -)

  uint64_t* xrow(int r) { return &x_[static_cast<size_t>(r) * words_]; }
  uint64_t* zrow(int r) { return &z_[static_cast<size_t>(r) * words_]; }
  const uint64_t* xrow(int r) const { return &x_[static_cast<size_t>(r) * words_]; }
  const uint64_t* zrow(int r) const { return &z_[static_cast<size_t>(r) * words_]; }
  bool xbit(int r, int q) const { return (xrow(r)[q >> 6] >> (q & 63)) & 1; }
  bool zbit(int r, int q) const { return (zrow(r)[q >> 6] >> (q & 63)) & 1; }

  // row h := row i * row h (Pauli product with exact sign bookkeeping)
  void rowsum(int h, int i);
  void row_copy(int dst, int src);
  void row_set_z(int r, int q, int sign);

  void measure_enum(StabilizerState state, int next_qubit, double prob, BitString& prefix,
                    std::map<std::string, double>& out, size_t max_support) const;
};

}  // namespace lchzk
