#include "lchzk/analysis.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lchzk/parallel.hpp"
#include "lchzk/sampler.hpp"
#include "lchzk/steane.hpp"

namespace lchzk {

namespace {

Eigen::MatrixXcd pauli_power(char kind, long N) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  Eigen::MatrixXcd m = pauli_matrix(kind);
  for (long i = 0; i < N; ++i) out = kron(out, m);
  return out;
}

}  // namespace

Eigen::MatrixXcd delta_projector(long N, int parity_bit) {
  if (N > 7) throw std::invalid_argument("dense parity projector supports N <= 7");
  const uint64_t dim = uint64_t{1} << N;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (uint64_t x = 0; x < dim; ++x)
    if ((__builtin_popcountll(x) & 1) == parity_bit) out(x, x) = 1.0;
  return out;
}

Eigen::MatrixXcd code_projector(long N, int logical) {
  const uint64_t dim = uint64_t{1} << N;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  if (N == 1) {
    out(logical, logical) = 1.0;  // degenerate toy code
    return out;
  }
  if (N != 7) throw std::invalid_argument("dense code projector supports N in {1, 7}");
  for (const BitString& w : SteaneCode::base_words(logical)) {
    uint64_t idx = bitstring_value(w);
    out(idx, idx) = 1.0;
  }
  return out;
}

Projectors code_projectors(long N) {
  return Projectors{code_projector(N, 0), code_projector(N, 1), delta_projector(N, 0),
                    delta_projector(N, 1)};
}

Eigen::MatrixXcd xi_apply(const Eigen::MatrixXcd& sigma, long N) {
  if (N > 7) throw std::invalid_argument("xi supports N <= 7 densely");
  const uint64_t dim = uint64_t{1} << N;
  if (sigma.rows() != static_cast<Eigen::Index>(dim)) throw std::invalid_argument("xi input dimension");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2, 2);
  const char kinds[4] = {'I', 'X', 'Y', 'Z'};
  for (char kind : kinds) {
    cx coeff = (pauli_power(kind, N).adjoint() * sigma).trace();
    out += 0.5 * coeff * pauli_matrix(kind);
  }
  return out;
}

Eigen::MatrixXcd xi_adjoint(const Eigen::MatrixXcd& tau, long N) {
  if (tau.rows() != 2 || tau.cols() != 2) throw std::invalid_argument("xi adjoint expects one qubit");
  if (N > 7) throw std::invalid_argument("xi supports N <= 7 densely");
  const uint64_t dim = uint64_t{1} << N;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  const char kinds[4] = {'I', 'X', 'Y', 'Z'};
  for (char kind : kinds) {
    cx coeff = (pauli_matrix(kind).adjoint() * tau).trace();
    out += 0.5 * coeff * pauli_power(kind, N);
  }
  return out;
}

Eigen::MatrixXcd xi_choi(long N) {
  const uint64_t dim = uint64_t{1} << N;
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
  for (uint64_t i = 0; i < dim; ++i) {
    for (uint64_t j = 0; j < dim; ++j) {
      Eigen::MatrixXcd eij = Eigen::MatrixXcd::Zero(dim, dim);
      eij(i, j) = 1.0;
      Eigen::MatrixXcd block = xi_apply(eij, N);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) choi(a * dim + i, b * dim + j) = block(a, b);
    }
  }
  return choi;
}

CliffordCircuit transversal_circuit(const CliffordCircuit& c, long N) {
  CliffordCircuit out(static_cast<int>(c.n * N));
  for (long j = 0; j < N; ++j) {
    std::vector<int> map(c.n);
    for (int s = 0; s < c.n; ++s) map[s] = static_cast<int>(s * N + j);
    out.append(c.remapped(out.n, map));
  }
  return out;
}

SoundnessResult soundness_check(const LchInstance& inst, const PureEnsemble& physical,
                                const EncodingKey& claimed_key, int term_index) {
  if (claimed_key.n != 1 || inst.n != 1)
    throw std::invalid_argument("soundness check runs at one logical qubit");
  const LchTerm& term = inst.terms.at(term_index);
  if (term.k() != 1) throw std::invalid_argument("soundness check needs an arity-1 term");
  const long N = claimed_key.N;

  // Decode the code register and rotate it by the transversal Clifford; the
  // verifier accepts exactly the outcomes whose code string carries a
  // logical 1.
  Eigen::MatrixXcd xi_code = decode_code_register(physical, claimed_key);
  Eigen::MatrixXcd u = dense_unitary(transversal_circuit(term.clifford, N), static_cast<int>(N));
  Eigen::MatrixXcd rotated = u * xi_code * u.adjoint();
  double accept = 0.0;
  for (const BitString& w : SteaneCode::base_words(1)) accept += rotated(bitstring_value(w), bitstring_value(w)).real();

  // Bound: energy of the fully decoded logical state against the term.
  Eigen::MatrixXcd rho = xi_apply(xi_code, N);
  double lower = (term.local_projection() * rho).trace().real();

  return SoundnessResult{1.0 - accept, lower};
}

DenseState prepare_rho_r(const LchInstance& inst, int term_index) {
  const LchTerm& term = inst.terms.at(term_index);
  const int k = term.k();
  BitString target(k, 0);
  target[0] = 1;
  DenseState local = DenseState::basis(k, target);
  local.apply_circuit(term.clifford.inverse());

  if (k == inst.n) {
    DenseState out = local;
    std::vector<int> mapping(inst.n);
    for (int s = 0; s < k; ++s) mapping[s] = term.support[s];
    out.permute_qubits(mapping);
    return out;
  }
  DenseState out = local.tensor(DenseState(inst.n - k));
  std::vector<int> mapping(inst.n);
  std::vector<bool> taken(inst.n, false);
  for (int s = 0; s < k; ++s) {
    mapping[s] = term.support[s];
    taken[term.support[s]] = true;
  }
  int next = k;
  for (int q = 0; q < inst.n; ++q)
    if (!taken[q]) mapping[next++] = q;
  out.permute_qubits(mapping);
  return out;
}

Transcript zk_simulate(const SimulatorConfig& cfg, Rng& rng) {
  const LchInstance& inst = *cfg.inst;
  inst.validate();
  const long N = SteaneCode(cfg.t_level).N();

  Transcript t;
  auto verdict = [&](bool accept) {
    t.messages.push_back(make_message(Role::Verifier, MessageKind::Verdict,
                                      {{"verdict", accept ? "accept" : "reject"}}));
  };

  // Challenge first.
  const int len = challenge_length(inst.m());
  BitString r(len);
  for (int i = 0; i < len; ++i) r[i] = static_cast<uint8_t>(rng.bit());
  const int term_index = select_term(r, inst.m());
  const LchTerm& term = inst.terms[term_index - 1];

  // Encode the challenge-passing state; commit to the fixed tuple
  // (identity permutation, zero pads) under the transparent backend.
  DenseState rho_r = prepare_rho_r(inst, term_index - 1);
  EncodingKey key = sample_key(inst.n, N, rng);
  EncodedWitness enc = encode_symbolic(rho_r, key, cfg.t_level);
  EncodingKey fixed = trivial_key(inst.n, N);
  fixed.salt = rng.bytes(kSaltBytes);
  Commitment z = commit(key_commit_bytes(fixed), fixed.salt, CommitmentBackend::Transparent);
  t.messages.push_back(make_message(
      Role::Prover, MessageKind::WitnessCommitment,
      {{"commitment", z.hex()}, {"qubits", 2L * inst.n * N}, {"t_level", cfg.t_level}}));

  // Coin-flip messages consistent with the predetermined r: the verifier
  // challenge is drawn honestly and the prover shares are back-solved.
  nlohmann::json commits = nlohmann::json::array();
  nlohmann::json opens = nlohmann::json::array();
  std::string ybits(len, '0'), zbits(len, '0');
  for (int i = 0; i < len; ++i) {
    int zi = rng.bit();
    int yi = r[i] ^ zi;
    zbits[i] = zi ? '1' : '0';
    ybits[i] = yi ? '1' : '0';
    auto salt = rng.bytes(kSaltBytes);
    commits.push_back(commit({static_cast<uint8_t>(yi)}, salt, CommitmentBackend::Transparent).hex());
    nlohmann::json open;
    open["y"] = yi;
    open["salt"] = Commitment{salt}.hex();
    opens.push_back(open);
  }
  t.messages.push_back(make_message(Role::Prover, MessageKind::CoinflipCommit, {{"commitments", commits}}));
  t.messages.push_back(make_message(Role::Verifier, MessageKind::CoinflipChallenge, {{"z", zbits}}));
  t.messages.push_back(make_message(Role::Prover, MessageKind::CoinflipReveal,
                                    {{"openings", opens}, {"y", ybits}, {"r", bitstring_str(r)}}));

  // Adversarial measurement, exactly as in the real interaction.
  ChallengeOutcome outcome;
  if (cfg.adversary.kind == AdversaryConfig::Kind::WrongTerm) {
    const LchTerm& other = inst.terms.at(cfg.adversary.wrong_term - 1);
    if (other.k() != term.k())
      throw std::invalid_argument("wrong-term adversary needs matching arity");
    LchTerm misread = term;
    misread.clifford = other.clifford;
    outcome = challenge_outcome(enc, misread, rng);
  } else {
    outcome = challenge_outcome(enc, term, rng);
  }
  if (cfg.adversary.kind == AdversaryConfig::Kind::Xor) {
    BitString mask = resolve_mask(cfg.adversary.mask_spec, static_cast<long>(outcome.u.size()), rng);
    outcome.u = bitstring_xor(outcome.u, mask);
  }
  t.messages.push_back(make_message(Role::Verifier, MessageKind::OutcomeU,
                                    {{"term", term_index}, {"u", bitstring_str(outcome.u)}}));

  // Predicate with the real encoding key; the subprotocol view is produced
  // from its bit alone (no commitment check, the simulator never holds an
  // opening of z).
  bool q_bit = eval_Q(term, key, outcome.u);
  if (!q_bit) {
    t.messages.push_back(make_message(Role::Prover, MessageKind::Abort, {{"reason", "predicate"}}));
    verdict(false);
    return t;
  }
  t.messages.push_back(make_message(Role::Prover, MessageKind::Npzk, {{"result", true}}));
  verdict(true);
  return t;
}

double total_variation(const std::map<std::string, long>& a, const std::map<std::string, long>& b,
                       long samples) {
  std::map<std::string, double> diff;
  for (const auto& [k, v] : a) diff[k] += static_cast<double>(v) / samples;
  for (const auto& [k, v] : b) diff[k] -= static_cast<double>(v) / samples;
  double tv = 0.0;
  for (const auto& [k, v] : diff) tv += std::abs(v);
  return 0.5 * tv;
}

DistributionReport compare_real_vs_simulated(const LchInstance& inst, const WitnessSpec& witness,
                                             const AdversaryConfig& adversary, int t_level,
                                             long samples, uint64_t seed, bool parallel) {
  std::vector<std::string> real(samples), sim(samples);
  ProtocolOptions options;
  options.t_level = t_level;
  SimulatorConfig cfg{&inst, adversary, t_level};

  run_samples(static_cast<uint64_t>(samples), seed, parallel, [&](uint64_t i, Rng& rng) {
    real[i] = run_protocol(inst, witness, adversary, options, rng).feature();
  });
  run_samples(static_cast<uint64_t>(samples), seed ^ 0x516cc1e9a1d8f3abULL, parallel,
              [&](uint64_t i, Rng& rng) { sim[i] = zk_simulate(cfg, rng).feature(); });

  DistributionReport report;
  report.samples = samples;
  for (const auto& f : real) ++report.real_hist[f];
  for (const auto& f : sim) ++report.sim_hist[f];
  report.tv = total_variation(report.real_hist, report.sim_hist, samples);
  return report;
}

nlohmann::json DistributionReport::to_json() const {
  nlohmann::json jr = nlohmann::json::object(), js = nlohmann::json::object();
  for (const auto& [k, v] : real_hist) jr[k] = v;
  for (const auto& [k, v] : sim_hist) js[k] = v;
  return nlohmann::json{{"tv", tv}, {"samples", samples}, {"real", jr}, {"simulated", js}};
}

}  // namespace lchzk
