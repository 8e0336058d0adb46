#pragma once

#include <Eigen/Dense>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "lchzk/encoding.hpp"
#include "lchzk/lch.hpp"
#include "lchzk/protocol.hpp"

namespace lchzk {

// Parity projectors (I +- Z^{xN})/2 on N qubits.
Eigen::MatrixXcd delta_projector(long N, int parity_bit);
// Codeword-support projector sum_{x in D_N^b} |x><x|; dense for N in {1, 7}
// (N = 1 is the degenerate toy code D_1^b = {b}).
Eigen::MatrixXcd code_projector(long N, int logical);

struct Projectors {
  Eigen::MatrixXcd pi0, pi1, delta0, delta1;
};
Projectors code_projectors(long N);

// The N-qubit to 1-qubit map
//   Xi(sigma) = ( <I,sigma> I + <X^xN,sigma> X + <Y^xN,sigma> Y + <Z^xN,sigma> Z ) / 2.
// Trace preserving; completely positive when N = 1 (mod 4).
Eigen::MatrixXcd xi_apply(const Eigen::MatrixXcd& sigma, long N);
// Adjoint: Xi*(|0><0|) and Xi*(|1><1|) are the parity projectors.
Eigen::MatrixXcd xi_adjoint(const Eigen::MatrixXcd& tau, long N);
// Choi matrix of Xi (output tensor input), for positivity checks.
Eigen::MatrixXcd xi_choi(long N);

// Dense transversal application of a k-qubit circuit to k blocks of N qubits
// laid out block-major (k*N total; wire s of copy j acts on qubit s*N + j).
CliffordCircuit transversal_circuit(const CliffordCircuit& c, long N);

// Reject probability of the verifier against an adversarial first message,
// versus the decoding bound <H_j, Xi(decoded)>.  Dense budget: one logical
// qubit, so adversarial states live on 2N qubits and arity-1 terms.
struct SoundnessResult {
  double reject_prob = 0.0;
  double lower_bound = 0.0;
};

SoundnessResult soundness_check(const LchInstance& inst, const PureEnsemble& physical,
                                const EncodingKey& claimed_key, int term_index);

// State that passes term j with certainty: support qubits carry
// C_j^dagger |1 0^{k-1}>, all other qubits |0>.
DenseState prepare_rho_r(const LchInstance& inst, int term_index);

// Simulator: draw the challenge first, encode the challenge-passing state
// instead of any witness, commit to a fixed tuple under the transparent
// backend, then run the adversary and the predicate exactly as the real
// interaction does.
struct SimulatorConfig {
  const LchInstance* inst = nullptr;
  AdversaryConfig adversary;
  int t_level = 2;
};

Transcript zk_simulate(const SimulatorConfig& cfg, Rng& rng);

struct DistributionReport {
  std::map<std::string, long> real_hist, sim_hist;
  double tv = 0.0;
  long samples = 0;

  nlohmann::json to_json() const;
};

double total_variation(const std::map<std::string, long>& a, const std::map<std::string, long>& b,
                       long samples);

DistributionReport compare_real_vs_simulated(const LchInstance& inst, const WitnessSpec& witness,
                                             const AdversaryConfig& adversary, int t_level,
                                             long samples, uint64_t seed, bool parallel = true);

}  // namespace lchzk
