#include "lchzk/protocol.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "lchzk/sampler.hpp"

namespace lchzk {

const char* role_name(Role r) { return r == Role::Prover ? "prover" : "verifier"; }

const char* kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::WitnessCommitment: return "witness+commitment";
    case MessageKind::CoinflipCommit: return "coinflip-commit";
    case MessageKind::CoinflipChallenge: return "coinflip-challenge";
    case MessageKind::CoinflipReveal: return "coinflip-reveal";
    case MessageKind::OutcomeU: return "outcome-u";
    case MessageKind::Npzk: return "npzk";
    case MessageKind::Abort: return "abort";
    case MessageKind::Verdict: return "verdict";
  }
  return "?";
}

namespace {

Role role_from(const std::string& s) {
  if (s == "prover") return Role::Prover;
  if (s == "verifier") return Role::Verifier;
  throw std::invalid_argument("unknown role: " + s);
}

MessageKind kind_from(const std::string& s) {
  for (MessageKind k :
       {MessageKind::WitnessCommitment, MessageKind::CoinflipCommit, MessageKind::CoinflipChallenge,
        MessageKind::CoinflipReveal, MessageKind::OutcomeU, MessageKind::Npzk, MessageKind::Abort,
        MessageKind::Verdict})
    if (s == kind_name(k)) return k;
  throw std::invalid_argument("unknown message kind: " + s);
}

}  // namespace

Message make_message(Role role, MessageKind kind, const nlohmann::json& payload) {
  Message m;
  m.role = role;
  m.kind = kind;
  m.payload_text = payload.dump();
  return m;
}

nlohmann::json Message::payload() const { return nlohmann::json::parse(payload_text); }

bool Transcript::accepted() const {
  for (const Message& m : messages)
    if (m.kind == MessageKind::Verdict) return m.payload().at("verdict").get<std::string>() == "accept";
  return false;
}

bool Transcript::aborted() const {
  for (const Message& m : messages)
    if (m.kind == MessageKind::Abort) return true;
  return false;
}

std::optional<std::string> Transcript::challenge_string() const {
  for (const Message& m : messages) {
    if (m.kind == MessageKind::CoinflipReveal || m.kind == MessageKind::CoinflipChallenge) {
      auto p = m.payload();
      if (p.contains("r")) return p.at("r").get<std::string>();
    }
  }
  return std::nullopt;
}

std::string Transcript::feature() const {
  std::string r = challenge_string().value_or("-");
  std::string outcome = "q1";
  if (aborted()) outcome = "abort";
  std::string verdict = "reject";
  for (const Message& m : messages) {
    if (m.kind == MessageKind::Npzk) outcome = m.payload().at("result").get<bool>() ? "q1" : "q0";
    if (m.kind == MessageKind::Verdict) verdict = m.payload().at("verdict").get<std::string>();
  }
  return "r=" + r + ";" + outcome + ";" + verdict;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const Message& m : messages) {
    nlohmann::json line{
        {"role", role_name(m.role)}, {"kind", kind_name(m.kind)}, {"payload", m.payload()}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::from_jsonl(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    t.messages.push_back(make_message(role_from(j.at("role").get<std::string>()),
                                      kind_from(j.at("kind").get<std::string>()), j.at("payload")));
  }
  return t;
}

bool transcript_order_valid(const Transcript& t) {
  // witness+commitment, then either the coin-flip triple or a direct
  // challenge, then outcome-u, then npzk or abort, then exactly one verdict.
  enum State { Start, Committed, FlipCommitted, FlipChallenged, Flipped, Measured, Checked, Done };
  State st = Start;
  for (const Message& m : t.messages) {
    switch (st) {
      case Start:
        if (m.kind != MessageKind::WitnessCommitment || m.role != Role::Prover) return false;
        st = Committed;
        break;
      case Committed:
        if (m.kind == MessageKind::CoinflipCommit && m.role == Role::Prover)
          st = FlipCommitted;
        else if (m.kind == MessageKind::CoinflipChallenge && m.role == Role::Verifier)
          st = Flipped;  // verifier-picks-r mode
        else
          return false;
        break;
      case FlipCommitted:
        if (m.kind != MessageKind::CoinflipChallenge || m.role != Role::Verifier) return false;
        st = FlipChallenged;
        break;
      case FlipChallenged:
        if (m.kind == MessageKind::CoinflipReveal && m.role == Role::Prover)
          st = Flipped;
        else if (m.kind == MessageKind::Abort)
          st = Checked;
        else
          return false;
        break;
      case Flipped:
        if (m.kind != MessageKind::OutcomeU || m.role != Role::Verifier) return false;
        st = Measured;
        break;
      case Measured:
        if ((m.kind == MessageKind::Npzk || m.kind == MessageKind::Abort) && m.role == Role::Prover)
          st = Checked;
        else
          return false;
        break;
      case Checked:
        if (m.kind != MessageKind::Verdict || m.role != Role::Verifier) return false;
        st = Done;
        break;
      case Done:
        return false;  // nothing may follow the verdict
    }
  }
  return st == Done;
}

// --- coin flipping -----------------------------------------------------------

int challenge_length(int m) {
  if (m < 1) throw std::invalid_argument("need at least one term");
  int len = 0;
  while ((1 << len) < m) ++len;
  return len;
}

int select_term(const BitString& r, int m) {
  if (m < 1) throw std::invalid_argument("need at least one term");
  return static_cast<int>(bitstring_value(r) % static_cast<uint64_t>(m)) + 1;
}

CoinFlipResult coin_flip(int len, Rng& prover_rng, Rng& verifier_rng, CommitmentBackend backend,
                         std::vector<Message>* wire) {
  CoinFlipResult result;
  std::vector<uint8_t> ys(len), zs(len);
  std::vector<std::vector<uint8_t>> salts(len);
  nlohmann::json commits = nlohmann::json::array();
  for (int i = 0; i < len; ++i) {
    ys[i] = static_cast<uint8_t>(prover_rng.bit());
    salts[i] = prover_rng.bytes(kSaltBytes);
    commits.push_back(commit({ys[i]}, salts[i], backend).hex());
  }
  if (wire)
    wire->push_back(make_message(Role::Prover, MessageKind::CoinflipCommit, {{"commitments", commits}}));

  std::string zbits(len, '0');
  for (int i = 0; i < len; ++i) {
    zs[i] = static_cast<uint8_t>(verifier_rng.bit());
    zbits[i] = zs[i] ? '1' : '0';
  }
  if (wire)
    wire->push_back(make_message(Role::Verifier, MessageKind::CoinflipChallenge, {{"z", zbits}}));

  // Reveal and verify openings.
  nlohmann::json opens = nlohmann::json::array();
  result.r.resize(len);
  std::string rbits(len, '0'), ybits(len, '0');
  for (int i = 0; i < len; ++i) {
    Commitment c = Commitment::from_hex(commits[i].get<std::string>());
    if (!verify_open(c, {ys[i]}, salts[i], backend)) {
      result.aborted = true;
      return result;
    }
    result.r[i] = ys[i] ^ zs[i];
    rbits[i] = result.r[i] ? '1' : '0';
    ybits[i] = ys[i] ? '1' : '0';
    nlohmann::json open;
    open["y"] = static_cast<int>(ys[i]);
    open["salt"] = Commitment{salts[i]}.hex();
    opens.push_back(open);
  }
  if (wire)
    wire->push_back(make_message(Role::Prover, MessageKind::CoinflipReveal,
                                 {{"openings", opens}, {"y", ybits}, {"r", rbits}}));
  return result;
}

// --- predicates -----------------------------------------------------------------

bool eval_R(const LchTerm& term, const std::vector<Trap>& traps, const std::vector<int>& perm,
            const BitString& u, long N) {
  const int k = term.k();
  if (u.size() != static_cast<size_t>(2 * k) * N) throw std::invalid_argument("outcome length mismatch");
  int t_level = 0;
  for (long v = 1; v < N; v *= 7) ++t_level;
  SteaneCode code(t_level);
  if (code.N() != N) throw std::invalid_argument("N must be a power of 7");

  // Undo the permutation per block: wire w holds u[perm[w]].
  std::vector<BitString> ys(k), zs(k);
  for (int s = 0; s < k; ++s) {
    const size_t base = static_cast<size_t>(s) * 2 * N;
    BitString pre(2 * N);
    for (long w = 0; w < 2 * N; ++w) pre[w] = u[base + perm[w]];
    ys[s] = subrange(pre, 0, N);
    zs[s] = subrange(pre, N, N);
  }

  // Condition 1: every y is a codeword and at least one carries logical 1.
  bool any_one = false;
  for (int s = 0; s < k; ++s) {
    auto logical = code.logical_decode(ys[s]);
    if (!logical) return false;
    any_one |= (*logical == 1);
  }
  if (!any_one) return false;

  // Condition 2: every trap column has nonzero amplitude in C|t_col>.
  for (long j = 0; j < N; ++j) {
    DenseState col(k);
    auto& amp = col.amplitudes();
    for (uint64_t idx = 0; idx < amp.size(); ++idx) {
      cx v{1.0, 0.0};
      for (int s = 0; s < k; ++s) {
        Trap t = traps[static_cast<size_t>(term.support[s]) * N + j];
        v *= trap_amplitudes(t)[(idx >> (k - 1 - s)) & 1];
      }
      amp[idx] = v;
    }
    col.apply_circuit(term.clifford);
    uint64_t z_index = 0;
    for (int s = 0; s < k; ++s) z_index = (z_index << 1) | zs[s][j];
    if (std::abs(col.amplitude(z_index)) < 1e-9) return false;
  }
  return true;
}

bool eval_Q(const LchTerm& term, const EncodingKey& key, const BitString& u) {
  const long N = key.N;
  const int k = term.k();
  PadShift shift = pad_shift(term.clifford, term.support, key.pad_x, key.pad_z, key.n, N);
  BitString shifted = u;
  for (int s = 0; s < k; ++s)
    for (long pos = 0; pos < 2 * N; ++pos)
      shifted[static_cast<size_t>(s) * 2 * N + pos] ^=
          shift.c[static_cast<size_t>(term.support[s]) * 2 * N + pos];
  return eval_R(term, key.traps, key.perm, shifted, N);
}

// --- NP statement check -----------------------------------------------------------

bool npzk_ideal_verify(const NpzkStatement& statement, const LchTerm& term, const EncodingKey& key,
                       CommitmentBackend backend) {
  if (!verify_open(statement.z, key_commit_bytes(key), key.salt, backend)) return false;
  return eval_Q(term, key, statement.u);
}

GmwStats gmw_coloring_demo(const Graph& g, const std::vector<int>& coloring, int rounds,
                           CommitmentBackend backend, Rng& rng) {
  if (static_cast<int>(coloring.size()) != g.vertices)
    throw std::invalid_argument("coloring size mismatch");
  for (int c : coloring)
    if (c < 0 || c > 2) throw std::invalid_argument("colors must be 0, 1 or 2");
  if (g.edges.empty()) throw std::invalid_argument("graph needs at least one edge");

  GmwStats stats;
  stats.rounds = rounds;
  for (int round = 0; round < rounds; ++round) {
    // Random relabeling of the three colors, then one commitment per vertex.
    std::vector<int> sigma{0, 1, 2};
    rng.shuffle(sigma);
    std::vector<std::vector<uint8_t>> salts(g.vertices);
    std::vector<Commitment> commits(g.vertices);
    for (int v = 0; v < g.vertices; ++v) {
      salts[v] = rng.bytes(kSaltBytes);
      commits[v] = commit({static_cast<uint8_t>(sigma[coloring[v]])}, salts[v], backend);
    }
    auto [a, b] = g.edges[rng.below(g.edges.size())];
    uint8_t ca = static_cast<uint8_t>(sigma[coloring[a]]);
    uint8_t cb = static_cast<uint8_t>(sigma[coloring[b]]);
    bool ok = verify_open(commits[a], {ca}, salts[a], backend) &&
              verify_open(commits[b], {cb}, salts[b], backend) && ca != cb && ca <= 2 && cb <= 2;
    if (ok) ++stats.passed;
  }
  return stats;
}

// --- protocol sessions -------------------------------------------------------------

AdversaryConfig AdversaryConfig::honest() { return AdversaryConfig{}; }

AdversaryConfig AdversaryConfig::parse(const std::string& spec) {
  AdversaryConfig cfg;
  if (spec == "honest") return cfg;
  if (spec.rfind("xor:", 0) == 0) {
    cfg.kind = Kind::Xor;
    cfg.mask_spec = spec.substr(4);
    return cfg;
  }
  if (spec.rfind("wrong-term:", 0) == 0) {
    cfg.kind = Kind::WrongTerm;
    cfg.wrong_term = std::stoi(spec.substr(11));
    return cfg;
  }
  throw std::invalid_argument("adversary must be honest, xor:<mask-spec> or wrong-term:<j>");
}

std::string AdversaryConfig::str() const {
  switch (kind) {
    case Kind::Honest: return "honest";
    case Kind::Xor: return "xor:" + mask_spec;
    case Kind::WrongTerm: return "wrong-term:" + std::to_string(wrong_term);
  }
  return "?";
}

WitnessSpec WitnessSpec::from_state(DenseState s) {
  WitnessSpec w;
  w.kind = Kind::State;
  w.n = s.n();
  w.state = std::move(s);
  return w;
}

WitnessSpec WitnessSpec::maximally_mixed(int n) {
  WitnessSpec w;
  w.kind = Kind::MaximallyMixed;
  w.n = n;
  return w;
}

DenseState WitnessSpec::resolve(Rng& rng) const {
  if (kind == Kind::State) return state;
  // Uniform standard basis state; the ensemble average is I / 2^n.
  uint64_t idx = rng.below(uint64_t{1} << n);
  return DenseState::basis(n, bitstring_of_value(idx, n));
}

Transcript run_protocol(const LchInstance& inst, const WitnessSpec& witness,
                        const AdversaryConfig& adversary, const ProtocolOptions& options, Rng& rng) {
  inst.validate();
  if (witness.n != inst.n) throw std::invalid_argument("witness width must match instance");
  const long N = SteaneCode(options.t_level).N();

  Transcript t;
  auto verdict = [&](bool accept) {
    t.messages.push_back(make_message(Role::Verifier, MessageKind::Verdict,
                                      {{"verdict", accept ? "accept" : "reject"}}));
  };

  // Prover encoding and commitment.
  DenseState logical = witness.resolve(rng);
  EncodingKey key = sample_key(inst.n, N, rng);
  EncodedWitness enc = encode_symbolic(logical, key, options.t_level);
  Commitment z = commit(key_commit_bytes(key), key.salt, options.backend);
  t.messages.push_back(make_message(
      Role::Prover, MessageKind::WitnessCommitment,
      {{"commitment", z.hex()}, {"qubits", 2L * inst.n * N}, {"t_level", options.t_level}}));

  // Challenge selection.
  const int len = challenge_length(inst.m());
  BitString r;
  if (options.verifier_picks_r) {
    r.resize(len);
    for (int i = 0; i < len; ++i) r[i] = static_cast<uint8_t>(rng.bit());
    t.messages.push_back(
        make_message(Role::Verifier, MessageKind::CoinflipChallenge, {{"r", bitstring_str(r)}}));
  } else {
    CoinFlipResult flip = coin_flip(len, rng, rng, options.backend, &t.messages);
    if (flip.aborted) {
      t.messages.push_back(make_message(Role::Prover, MessageKind::Abort, {{"reason", "coin flip"}}));
      verdict(false);
      return t;
    }
    r = flip.r;
  }
  const int term_index = select_term(r, inst.m());
  const LchTerm& term = inst.terms[term_index - 1];

  // Verifier measurement (honest via the exact sampler, adversaries on top).
  ChallengeOutcome outcome;
  if (adversary.kind == AdversaryConfig::Kind::WrongTerm) {
    const LchTerm& other = inst.terms.at(adversary.wrong_term - 1);
    if (other.k() != term.k())
      throw std::invalid_argument("wrong-term adversary needs matching arity");
    LchTerm misread = term;
    misread.clifford = other.clifford;  // wrong basis on the right blocks
    outcome = challenge_outcome(enc, misread, rng);
  } else {
    outcome = challenge_outcome(enc, term, rng);
  }
  if (adversary.kind == AdversaryConfig::Kind::Xor) {
    BitString mask = resolve_mask(adversary.mask_spec, static_cast<long>(outcome.u.size()), rng);
    outcome.u = bitstring_xor(outcome.u, mask);
  }
  outcome.r = r;
  outcome.term_index = term_index;
  t.messages.push_back(make_message(Role::Verifier, MessageKind::OutcomeU,
                                    {{"term", term_index}, {"u", bitstring_str(outcome.u)}}));

  // Prover check; abort on a sprung trap.
  if (!eval_Q(term, key, outcome.u)) {
    t.messages.push_back(make_message(Role::Prover, MessageKind::Abort, {{"reason", "predicate"}}));
    verdict(false);
    return t;
  }

  bool proof_ok = npzk_ideal_verify(NpzkStatement{z, outcome.u}, term, key, options.backend);
  t.messages.push_back(make_message(Role::Prover, MessageKind::Npzk, {{"result", proof_ok}}));
  verdict(proof_ok);
  return t;
}

double exact_acceptance_probability(const LchInstance& inst, const DenseState& witness, int t_level) {
  if (witness.n() != inst.n) throw std::invalid_argument("witness width must match instance");
  const int len = challenge_length(inst.m());
  const uint64_t strings = uint64_t{1} << len;
  double total = 0.0;
  for (uint64_t rv = 0; rv < strings; ++rv) {
    BitString r = bitstring_of_value(rv, len);
    const LchTerm& term = inst.terms[select_term(r, inst.m()) - 1];
    const CliffordCircuit c_eff = (t_level % 2 == 0) ? term.clifford : term.clifford.conjugated();
    Eigen::MatrixXcd rho = witness.reduced_density(term.support);
    Eigen::MatrixXcd u = dense_unitary(c_eff);
    total += 1.0 - (u * rho * u.adjoint())(0, 0).real();
  }
  return total / static_cast<double>(strings);
}

}  // namespace lchzk
