#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lchzk/bits.hpp"
#include "lchzk/encoding.hpp"
#include "lchzk/lch.hpp"
#include "lchzk/rng.hpp"

namespace lchzk {

// Verifier-side measurement record for one challenge: the claimed standard
// basis outcomes u = u_{i_1} ... u_{i_k}, 2N bits per support block.
struct ChallengeOutcome {
  BitString r;               // challenge string (may be empty outside a protocol run)
  int term_index = -1;       // 1-based, when selected by a protocol run
  std::vector<int> support;
  BitString u;               // length 2kN
};

// Pad conjugation C^{x2N} X^a Z^b = i^alpha X^c Z^d C^{x2N}; c,d agree with
// a,b off the support blocks.
struct PadShift {
  BitString c, d;      // length 2nN, block-major physical positions
  int alpha_power = 0; // power of i
};

PadShift pad_shift(const CliffordCircuit& c_r, const std::vector<int>& support, const BitString& a,
                   const BitString& b, int n, long N);

// Exact sampling of the verifier's challenge measurement from the symbolic
// form: logical outcome from the reduced density operator, code strings
// uniform over the codeword class, trap columns from k-qubit dense states,
// then permutation and pad shift.  Matches the physical tableau distribution.
ChallengeOutcome challenge_outcome(const EncodedWitness& enc, const LchTerm& term, Rng& rng);

// Outcome of the encoding WITHOUT the one-time pad (the attack experiments
// strip it off; pads only shift u by a known constant).
BitString sample_unpadded_outcome(const EncodedWitness& enc, const LchTerm& term, Rng& rng);

// Exact distribution induced by challenge_outcome, enumerated over the
// factorized branch structure (logical outcome x codewords x trap columns).
// Feasible for small N and arity; refuses to expand past max_support.
std::map<std::string, double> challenge_distribution(const EncodedWitness& enc, const LchTerm& term,
                                                     size_t max_support = (1u << 20));

// 1 - tr(H_j rho), exact.
double acceptance_probability(const LchInstance& inst, const Eigen::MatrixXcd& rho, int term_index);
double acceptance_probability(const LchInstance& inst, const DenseState& state, int term_index);

// One run of the XOR attack: honest unpadded outcome w, predicate bit of
// w XOR mask.
int xor_attack_run(const EncodedWitness& enc, const LchTerm& term, const BitString& mask, Rng& rng);

// (1 - 3^{-(k+1)})^{K/k}, the output-1 bound for masks of weight >= K.
double attack_bound(int k, long K);

// Trap string t over {0,+,r} such that qubit j of C|t> is a standard basis
// state: eigenstring of the conjugated Pauli C^dagger Z_j C.
std::string trap_string(const CliffordCircuit& c, int j);

// Monte Carlo estimate over (pi, t) of the probability that the mask leaves
// the predicate untouched: every code-side flip pattern is a logical-0
// codeword (usually forced to zero for masks below the code distance) and
// every trap-column flip keeps the column inside the support of C|t_col>.
// For masks of weight below the code distance this is the damping factor
// beta with q_xi(mask) = beta * q_xi(0).
double estimate_beta(const BitString& mask, const LchTerm& term, long N, int t_level, long samples,
                     uint64_t seed, bool parallel = true);

struct AttackReport {
  std::string mask_spec;
  long samples = 0;
  double q_hat = 0.0;
  double ci95 = 0.0;
  std::optional<double> bound;  // populated when the mask weight reaches the code distance

  nlohmann::json to_json() const;
};

// Mask spec: "zero", "mask:<bits>", or "weight:<w>" (fresh random positions
// each run).
BitString resolve_mask(const std::string& spec, long bits, Rng& rng);

AttackReport run_xor_attack_experiment(const DenseState& logical, const LchTerm& term, int t_level,
                                       const std::string& mask_spec, long samples, uint64_t seed,
                                       bool parallel = true);

}  // namespace lchzk
