#pragma once

#include <Eigen/Dense>
#include <array>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "lchzk/bits.hpp"
#include "lchzk/dense.hpp"
#include "lchzk/rng.hpp"
#include "lchzk/steane.hpp"
#include "lchzk/tableau.hpp"

namespace lchzk {

// Trap qubit preparations.
enum class Trap : uint8_t { Zero, Plus, MinusI };  // |0>, |+>, (|0> - i|1>)/sqrt2

char trap_char(Trap t);
Trap trap_from_char(char c);
// 2-dimensional state vector of the trap preparation.
std::array<cx, 2> trap_amplitudes(Trap t);

// The prover's secret: trap choices, the shared within-block permutation,
// one-time pad bits, and the commitment salt.
//
// Register layout: block i of the encoded witness occupies physical qubits
// [i*2N, (i+1)*2N).  Before the permutation, wires 0..N-1 of a block hold
// the code qubits (wire 0 is the encoder input) and wires N..2N-1 the traps.
// perm[w] is the physical position of pre-permutation wire w, so the
// physical string of a block is u_i with u_i[perm[w]] = (y_i z_i)[w].
// Pads are indexed by physical position (they are applied last).
struct EncodingKey {
  int n = 0;
  long N = 0;
  std::vector<Trap> traps;     // n*N entries, block-major
  std::vector<int> perm;       // 2N entries, one permutation shared by all blocks
  BitString pad_x, pad_z;      // 2nN entries each, block-major
  std::vector<uint8_t> salt;   // commitment randomness

  void validate() const;
  std::string trap_string() const;
  std::vector<int> perm_inverse() const;

  nlohmann::json to_json() const;
  static EncodingKey from_json(const nlohmann::json& j);
};

constexpr size_t kSaltBytes = 16;  // 128-bit commitment salt

EncodingKey sample_key(int n, long N, Rng& rng);
// pi = identity, pads zero, all traps |0>; useful in tests.
EncodingKey trivial_key(int n, long N);

// Symbolic encoded witness: the key plus the logical state, with the
// physical expansion deferred to the challenge sampler.
struct EncodedWitness {
  EncodingKey key;
  int t_level = 1;
  DenseState logical;

  long N() const { return key.N; }
};

EncodedWitness encode_symbolic(const DenseState& logical, const EncodingKey& key, int t_level);

// Physical form on 2nN qubits, available when the logical state is a
// stabilizer state.  Used to cross-validate the symbolic sampler.
StabilizerState encode_physical(const StabilizerState& logical, const EncodingKey& key, int t_level);

// Soundness decoding of an adversarial state: invert the pad, invert the
// permutation, discard traps.  Returns the code-register state on nN qubits.
// Adversarial states are supplied as mixtures of pure components (a full
// density matrix on 2nN qubits is out of reach); every map below is linear,
// so mixtures decode componentwise.
Eigen::MatrixXcd decode_code_register(const DenseState& physical, const EncodingKey& key);

struct PureEnsemble {
  std::vector<std::pair<double, DenseState>> parts;  // weights sum to 1
};

Eigen::MatrixXcd decode_code_register(const PureEnsemble& physical, const EncodingKey& key);

// Full decode: code register followed by the N-to-1 Pauli-projection channel
// per block.  Supported for n = 1 (the dense-budget regime).
Eigen::MatrixXcd soundness_decode(const PureEnsemble& physical, const EncodingKey& key);

// One-time-pad average of a single-qubit operator: (1/4) sum over the four pads.
Eigen::MatrixXcd qotp_twirl(const Eigen::MatrixXcd& rho);

}  // namespace lchzk
