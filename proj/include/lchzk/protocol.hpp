#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lchzk/bits.hpp"
#include "lchzk/encoding.hpp"
#include "lchzk/lch.hpp"
#include "lchzk/rng.hpp"

namespace lchzk {

// --- commitments -----------------------------------------------------------

enum class CommitmentBackend {
  Hash,         // SHA-256(salt || message); binding only computationally
  Transparent,  // stores (salt || message) in the clear; for tests/simulation
};

CommitmentBackend commitment_backend_from(const std::string& name);
const char* commitment_backend_name(CommitmentBackend b);

struct Commitment {
  std::vector<uint8_t> value;
  bool operator==(const Commitment& other) const { return value == other.value; }
  std::string hex() const;
  static Commitment from_hex(const std::string& h);
};

// Deterministic in (message, salt); salt must be kSaltBytes long.
Commitment commit(const std::vector<uint8_t>& message, const std::vector<uint8_t>& salt,
                  CommitmentBackend backend);
bool verify_open(const Commitment& z, const std::vector<uint8_t>& message,
                 const std::vector<uint8_t>& salt, CommitmentBackend backend);

// Canonical byte serialization of the committed tuple (pi, a, b).
std::vector<uint8_t> key_commit_bytes(const EncodingKey& key);

// --- wire format -------------------------------------------------------------

enum class Role { Prover, Verifier };
enum class MessageKind {
  WitnessCommitment,
  CoinflipCommit,
  CoinflipChallenge,
  CoinflipReveal,
  OutcomeU,
  Npzk,
  Abort,
  Verdict,
};

const char* role_name(Role r);
const char* kind_name(MessageKind k);

struct Message {
  Role role;
  MessageKind kind;
  nlohmann::json payload() const;
  std::string payload_text;  // serialized JSON payload
};

Message make_message(Role role, MessageKind kind, const nlohmann::json& payload);

struct Transcript {
  std::vector<Message> messages;

  bool accepted() const;
  bool aborted() const;
  std::optional<std::string> challenge_string() const;
  // Classical statistics used for distribution comparisons: challenge,
  // predicate outcome, verdict.
  std::string feature() const;

  std::string to_jsonl() const;
  static Transcript from_jsonl(const std::string& text);
};

// Message-order discipline both state machines enforce; shuffled or
// truncated transcripts fail this check.
bool transcript_order_valid(const Transcript& t);

// --- coin flipping -----------------------------------------------------------

// len parallel rounds of commit / challenge / reveal; r_i = y_i xor z_i.
// Appends the three wire messages to `wire` when given.  A failed opening
// aborts (empty result).
struct CoinFlipResult {
  BitString r;
  bool aborted = false;
};

CoinFlipResult coin_flip(int len, Rng& prover_rng, Rng& verifier_rng, CommitmentBackend backend,
                         std::vector<Message>* wire = nullptr);

// Challenge length for m terms.
int challenge_length(int m);
// 1-based term index selected by the challenge string: (value mod m) + 1.
int select_term(const BitString& r, int m);

// --- predicates ----------------------------------------------------------------

// R: split each block of u by the inverse permutation into (y, z); every y
// must be a codeword with at least one logical 1, and every trap column of z
// must have nonzero amplitude in C|t_col>.
bool eval_R(const LchTerm& term, const std::vector<Trap>& traps, const std::vector<int>& perm,
            const BitString& u, long N);

// Q: R after shifting u by the pad conjugation.
bool eval_Q(const LchTerm& term, const EncodingKey& key, const BitString& u);

// --- NP statement check ----------------------------------------------------------

// Ideal functionality for the classical zero-knowledge subprotocol: a trusted
// evaluator checks that the commitment opens to the key's (pi, a, b) and that
// Q holds, disclosing only the bit.
struct NpzkStatement {
  Commitment z;
  BitString u;
};

bool npzk_ideal_verify(const NpzkStatement& statement, const LchTerm& term, const EncodingKey& key,
                       CommitmentBackend backend);

// Standalone graph 3-coloring zero-knowledge demo (commit to a permuted
// coloring, open one random edge per round).  Not wired to the predicate Q.
struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

struct GmwStats {
  int rounds = 0;
  int passed = 0;
  bool all_passed() const { return passed == rounds; }
};

GmwStats gmw_coloring_demo(const Graph& g, const std::vector<int>& coloring, int rounds,
                           CommitmentBackend backend, Rng& rng);

// --- protocol sessions -------------------------------------------------------

struct AdversaryConfig {
  enum class Kind { Honest, Xor, WrongTerm };
  Kind kind = Kind::Honest;
  std::string mask_spec;   // for Xor
  int wrong_term = -1;     // 1-based, for WrongTerm

  static AdversaryConfig honest();
  static AdversaryConfig parse(const std::string& spec);
  std::string str() const;
};

struct WitnessSpec {
  enum class Kind { State, MaximallyMixed } kind = Kind::MaximallyMixed;
  DenseState state{1};
  int n = 1;

  static WitnessSpec from_state(DenseState s);
  static WitnessSpec maximally_mixed(int n);
  DenseState resolve(Rng& rng) const;  // mixed: uniform basis state per run
};

struct ProtocolOptions {
  int t_level = 2;
  CommitmentBackend backend = CommitmentBackend::Hash;
  bool verifier_picks_r = false;  // skip the coin flip, verifier draws r
};

Transcript run_protocol(const LchInstance& inst, const WitnessSpec& witness,
                        const AdversaryConfig& adversary, const ProtocolOptions& options, Rng& rng);

// Honest-parties acceptance probability in closed form: the challenge-string
// average of the probability that the measured logical outcome is nonzero.
double exact_acceptance_probability(const LchInstance& inst, const DenseState& witness, int t_level);

}  // namespace lchzk
