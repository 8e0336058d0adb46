#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "lchzk/bits.hpp"
#include "lchzk/pauli.hpp"
#include "lchzk/rng.hpp"

namespace lchzk {

// The 7-qubit CSS code and its t-fold concatenation.  Level t encodes one
// qubit into N = 7^t physical qubits; classical codeword sets are handled
// recursively (only the base lists are materialized).
class SteaneCode {
 public:
  explicit SteaneCode(int t_level);

  int t_level() const { return t_; }
  long N() const { return N_; }
  // Minimum Hamming weight of a codeword carrying logical 1, i.e. the number
  // of bit flips needed to change the logical value of a valid string: 3^t.
  long min_weight() const { return K_; }

  // Base code word lists, 8 strings each of length 7.
  static const std::array<BitString, 8>& base_words(int logical);

  bool is_codeword(const BitString& y) const;
  // Logical bit carried by y, or nullopt when y is not a codeword.
  std::optional<int> logical_decode(const BitString& y) const;

  // Uniform sample from the codeword set with the given logical bit.
  BitString sample_codeword(int logical, Rng& rng) const;

  // Encoder on N qubits: logical input on qubit 0, remaining qubits |0>.
  // Tree layout: outer code first, then one inner encoder per outer qubit,
  // numbering block-major (block i occupies qubits [i*7^{t-1}, (i+1)*7^{t-1})).
  CliffordCircuit encoder_circuit() const;
  static CliffordCircuit base_encoder();  // the 7-qubit encoder

  // 3^t; at t=1 checked against an exhaustive scan of the 15 nonzero words.
  long min_distance() const;

 private:
  int t_;
  long N_;
  long K_;
};

}  // namespace lchzk
