#include <nlohmann/json.hpp>
#include <set>

#include "doctest.h"
#include "lchzk/protocol.hpp"
#include "lchzk/sampler.hpp"
#include "oracles.hpp"

using namespace lchzk;

namespace {

LchInstance toy_instance() {
  // single term |0><0| on one qubit
  LchInstance inst;
  inst.n = 1;
  inst.k = 5;
  inst.p = 10;
  inst.q = 2;
  LchTerm t;
  t.clifford = CliffordCircuit(1);
  t.support = {0};
  inst.terms.push_back(t);
  return inst;
}

}  // namespace

TEST_CASE("commitments bind and open") {
  Rng rng(1);
  auto salt = rng.bytes(kSaltBytes);
  std::vector<uint8_t> msg{1, 2, 3};
  for (auto backend : {CommitmentBackend::Hash, CommitmentBackend::Transparent}) {
    Commitment a = commit(msg, salt, backend);
    Commitment b = commit(msg, salt, backend);
    CHECK(a == b);
    CHECK(verify_open(a, msg, salt, backend));
    std::vector<uint8_t> other{1, 2, 4};
    CHECK_FALSE(verify_open(a, other, salt, backend));
    auto salt2 = rng.bytes(kSaltBytes);
    CHECK_FALSE(verify_open(a, msg, salt2, backend));
  }
  CHECK_THROWS_AS(commit(msg, {1, 2}, CommitmentBackend::Hash), std::invalid_argument);
}

TEST_CASE("no collisions over an exhaustive 8-bit message domain") {
  Rng rng(2);
  auto salt = rng.bytes(kSaltBytes);
  std::set<std::string> seen;
  for (int m = 0; m < 256; ++m) {
    Commitment c = commit({static_cast<uint8_t>(m)}, salt, CommitmentBackend::Hash);
    CHECK(seen.insert(c.hex()).second);
  }
  CHECK(seen.size() == 256);
}

TEST_CASE("a prover cannot reopen a commitment on a different key") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    EncodingKey key = sample_key(1, 7, rng);
    EncodingKey other = sample_key(1, 7, rng);
    for (auto backend : {CommitmentBackend::Hash, CommitmentBackend::Transparent}) {
      Commitment z = commit(key_commit_bytes(key), key.salt, backend);
      CHECK(verify_open(z, key_commit_bytes(key), key.salt, backend));
      CHECK_FALSE(verify_open(z, key_commit_bytes(other), key.salt, backend));
    }
  }
}

TEST_CASE("coin flip XOR rule and wire shape") {
  // r_i = y_i xor z_i on the wire messages
  Rng prover(10), verifier(20);
  std::vector<Message> wire;
  CoinFlipResult res = coin_flip(3, prover, verifier, CommitmentBackend::Transparent, &wire);
  REQUIRE_FALSE(res.aborted);
  REQUIRE(wire.size() == 3);
  auto reveal = wire[2].payload();
  std::string y = reveal.at("y").get<std::string>();
  std::string z = wire[1].payload().at("z").get<std::string>();
  for (int i = 0; i < 3; ++i) CHECK(res.r[i] == ((y[i] - '0') ^ (z[i] - '0')));
}

TEST_CASE("coin flip output is uniform") {
  Rng rng(5);
  std::map<std::string, long> counts;
  const long total = 10000;
  for (long i = 0; i < total; ++i) {
    CoinFlipResult res = coin_flip(3, rng, rng, CommitmentBackend::Hash, nullptr);
    counts[bitstring_str(res.r)]++;
  }
  std::map<std::string, double> expected;
  for (int v = 0; v < 8; ++v) expected[bitstring_str(bitstring_of_value(v, 3))] = 1.0 / 8.0;
  CHECK(oracles::chi2_statistic(counts, expected, total) < oracles::chi2_critical_99(7));
}

TEST_CASE("challenge string to term index") {
  CHECK(select_term(bitstring_from("000"), 3) == 1);
  CHECK(select_term(bitstring_from("101"), 3) == 3);
  std::set<int> image;
  for (int v = 0; v < 8; ++v) image.insert(select_term(bitstring_of_value(v, 3), 3));
  CHECK(image == std::set<int>{1, 2, 3});
  CHECK(challenge_length(1) == 0);
  CHECK(challenge_length(3) == 2);
  CHECK(challenge_length(8) == 3);
}

TEST_CASE("predicate R on explicit outcomes") {
  EncodingKey key = trivial_key(1, 7);
  LchTerm term;
  term.clifford = CliffordCircuit(1);
  term.support = {0};

  BitString good = concat(bitstring_from("0010110"), BitString(7, 0));
  CHECK(eval_R(term, key.traps, key.perm, good, 7));

  BitString logical_zero = concat(bitstring_from("0001111"), BitString(7, 0));
  CHECK_FALSE(eval_R(term, key.traps, key.perm, logical_zero, 7));

  BitString sprung = concat(bitstring_from("0010110"), bitstring_from("1000000"));
  CHECK_FALSE(eval_R(term, key.traps, key.perm, sprung, 7));

  BitString not_codeword = concat(bitstring_from("1000000"), BitString(7, 0));
  CHECK_FALSE(eval_R(term, key.traps, key.perm, not_codeword, 7));
}

TEST_CASE("predicate Q adjusts for the pad and matches honest outcomes") {
  LchTerm term;
  term.clifford = CliffordCircuit(1);
  term.clifford.h(0);
  term.support = {0};

  // zero pads: Q == R
  EncodingKey key = trivial_key(1, 7);
  BitString u = concat(bitstring_from("0010110"), BitString(7, 0));
  CHECK(eval_Q(term, key, u) == eval_R(term, key.traps, key.perm, u, 7));

  // honest outcomes satisfy Q exactly when the logical outcome is nonzero
  Rng rng(8);
  SteaneCode code(1);
  for (int trial = 0; trial < 300; ++trial) {
    EncodingKey k = sample_key(1, 7, rng);
    DenseState witness(1);
    witness.apply_h(0);
    EncodedWitness enc = encode_symbolic(witness, k, 1);
    ChallengeOutcome out = challenge_outcome(enc, term, rng);

    PadShift shift = pad_shift(term.clifford, term.support, k.pad_x, k.pad_z, 1, 7);
    BitString unshifted = bitstring_xor(out.u, shift.c);
    BitString pre(14);
    for (long w = 0; w < 14; ++w) pre[w] = unshifted[k.perm[w]];
    int logical = code.logical_decode(subrange(pre, 0, 7)).value();
    CHECK(eval_Q(term, k, out.u) == (logical == 1));
  }

  // one flipped code bit spoils the decode
  EncodingKey k2 = trivial_key(1, 7);
  BitString tampered = concat(bitstring_from("0010111"), BitString(7, 0));
  CHECK_FALSE(eval_Q(term, k2, tampered));
}

TEST_CASE("ideal NP check enforces both clauses") {
  Rng rng(12);
  EncodingKey key = sample_key(1, 7, rng);
  LchTerm term;
  term.clifford = CliffordCircuit(1);
  term.support = {0};
  DenseState witness = DenseState::basis(1, bitstring_from("1"));
  EncodedWitness enc = encode_symbolic(witness, key, 1);
  ChallengeOutcome out = challenge_outcome(enc, term, rng);

  Commitment z = commit(key_commit_bytes(key), key.salt, CommitmentBackend::Hash);
  CHECK(npzk_ideal_verify({z, out.u}, term, key, CommitmentBackend::Hash));

  EncodingKey other = sample_key(1, 7, rng);
  other.salt = key.salt;
  CHECK_FALSE(npzk_ideal_verify({z, out.u}, term, other, CommitmentBackend::Hash));
}

TEST_CASE("graph coloring demo") {
  Rng rng(100);
  Graph k3{3, {{0, 1}, {1, 2}, {0, 2}}};
  GmwStats honest = gmw_coloring_demo(k3, {0, 1, 2}, 100, CommitmentBackend::Hash, rng);
  CHECK(honest.all_passed());

  // K4 admits no proper 3-coloring: at least one monochromatic edge per round
  Graph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  GmwStats cheat = gmw_coloring_demo(k4, {0, 1, 2, 0}, 600, CommitmentBackend::Hash, rng);
  CHECK_FALSE(cheat.all_passed());
  // catch rate at least 1/|E| per round; allow generous sampling slack
  CHECK(cheat.rounds - cheat.passed >= 60);
}

TEST_CASE("honest run on a yes instance accepts") {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});
  v.gates.push_back({VerificationGate::Kind::LambdaP, 1, 0});
  LchInstance inst = compile(v, 10);
  DenseState witness = history_state(v, DenseState::basis(2, bitstring_from("11")));

  // Even concatenation level: the transversal Clifford acts as the logical
  // Clifford itself, so a perfect witness passes with certainty.
  ProtocolOptions options;
  options.t_level = 2;
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    Transcript t = run_protocol(inst, WitnessSpec::from_state(witness),
                                AdversaryConfig::honest(), options, rng);
    CHECK(transcript_order_valid(t));
    CHECK(t.accepted());
    CHECK_FALSE(t.aborted());
  }

  // Odd level applies the entry-wise conjugate instead; the acceptance rate
  // drops to the conjugated-measurement prediction.
  double predicted = exact_acceptance_probability(inst, witness, 1);
  CHECK(predicted < 1.0 - 1e-3);
  ProtocolOptions toy;
  toy.t_level = 1;
  const int runs = 1200;
  int accepts = 0;
  for (int i = 0; i < runs; ++i)
    accepts += run_protocol(inst, WitnessSpec::from_state(witness), AdversaryConfig::honest(), toy,
                            rng)
                   .accepted()
                   ? 1
                   : 0;
  double rate = static_cast<double>(accepts) / runs;
  CHECK(std::abs(rate - predicted) < 3.0 * std::sqrt(predicted * (1 - predicted) / runs) + 0.01);
}

TEST_CASE("sprung traps abort the run") {
  LchInstance inst = toy_instance();
  DenseState witness = DenseState::basis(1, bitstring_from("1"));
  ProtocolOptions options;
  options.t_level = 1;
  AdversaryConfig adv = AdversaryConfig::parse("xor:weight:7");
  Rng rng(10);
  int aborts = 0;
  for (int i = 0; i < 200; ++i) {
    Transcript t = run_protocol(inst, WitnessSpec::from_state(witness), adv, options, rng);
    CHECK(transcript_order_valid(t));
    if (t.aborted()) {
      CHECK_FALSE(t.accepted());
      ++aborts;
    }
  }
  CHECK(aborts > 120);  // bound for weight-7 masks is 0.702^... well below 40%
}

TEST_CASE("prover without a witness is rejected at the energy rate") {
  LchInstance inst = toy_instance();
  ProtocolOptions options;
  options.t_level = 1;
  Rng rng(11);
  const int runs = 4000;
  int rejects = 0;
  for (int i = 0; i < runs; ++i) {
    Transcript t = run_protocol(inst, WitnessSpec::maximally_mixed(1), AdversaryConfig::honest(),
                                options, rng);
    rejects += t.accepted() ? 0 : 1;
  }
  // <H, I/2> = 1/2 rejection probability per challenge
  double rate = static_cast<double>(rejects) / runs;
  CHECK(rate > 0.5 - 3.0 * std::sqrt(0.25 / runs));
}

TEST_CASE("exact acceptance equals the challenge-averaged energy") {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});
  LchInstance inst = compile(v, 10);

  DenseState witness = history_state(v, DenseState::basis(2, bitstring_from("11")));
  double exact = exact_acceptance_probability(inst, witness, 2);

  // independent route: full-density energies term by term
  const int len = challenge_length(inst.m());
  Eigen::MatrixXcd rho = witness.density();
  double avg = 0.0;
  for (uint64_t rv = 0; rv < (uint64_t{1} << len); ++rv) {
    int j = select_term(bitstring_of_value(rv, len), inst.m()) - 1;
    Eigen::MatrixXcd h = embed_operator(inst.terms[j].local_projection(), inst.terms[j].support, inst.n);
    avg += 1.0 - (h * rho).trace().real();
  }
  avg /= static_cast<double>(uint64_t{1} << len);
  CHECK(std::abs(exact - avg) < 1e-9);
  CHECK(exact >= 1.0 - std::pow(2.0, -10));
}

TEST_CASE("transcripts serialize and enforce message order") {
  LchInstance inst = toy_instance();
  ProtocolOptions options;
  options.t_level = 1;
  Rng rng(14);
  Transcript t = run_protocol(inst, WitnessSpec::from_state(DenseState::basis(1, bitstring_from("1"))),
                              AdversaryConfig::honest(), options, rng);
  CHECK(transcript_order_valid(t));

  std::string jsonl = t.to_jsonl();
  Transcript back = Transcript::from_jsonl(jsonl);
  CHECK(back.to_jsonl() == jsonl);
  CHECK(back.accepted() == t.accepted());

  // shuffled or truncated transcripts fail the order check
  Rng shuffler(15);
  for (int trial = 0; trial < 50; ++trial) {
    Transcript shuffled = t;
    shuffler.shuffle(shuffled.messages);
    bool same_order = true;
    for (size_t i = 0; i < t.messages.size(); ++i)
      same_order &= shuffled.messages[i].kind == t.messages[i].kind;
    if (!same_order) CHECK_FALSE(transcript_order_valid(shuffled));
  }
  Transcript truncated = t;
  truncated.messages.pop_back();
  CHECK_FALSE(transcript_order_valid(truncated));
}

TEST_CASE("runs replay byte-identically under a fixed seed") {
  LchInstance inst = toy_instance();
  ProtocolOptions options;
  options.t_level = 2;
  Rng r1(77), r2(77);
  Transcript a = run_protocol(inst, WitnessSpec::from_state(DenseState::basis(1, bitstring_from("1"))),
                              AdversaryConfig::honest(), options, r1);
  Transcript b = run_protocol(inst, WitnessSpec::from_state(DenseState::basis(1, bitstring_from("1"))),
                              AdversaryConfig::honest(), options, r2);
  CHECK(a.to_jsonl() == b.to_jsonl());
}

TEST_CASE("verifier-picks-r mode skips the coin flip") {
  LchInstance inst = toy_instance();
  ProtocolOptions options;
  options.t_level = 1;
  options.verifier_picks_r = true;
  Rng rng(16);
  Transcript t = run_protocol(inst, WitnessSpec::from_state(DenseState::basis(1, bitstring_from("1"))),
                              AdversaryConfig::honest(), options, rng);
  CHECK(transcript_order_valid(t));
  CHECK(t.accepted());
  for (const Message& m : t.messages) CHECK(m.kind != MessageKind::CoinflipCommit);
}

TEST_CASE("adversary specs parse") {
  CHECK(AdversaryConfig::parse("honest").kind == AdversaryConfig::Kind::Honest);
  auto x = AdversaryConfig::parse("xor:weight:3");
  CHECK(x.kind == AdversaryConfig::Kind::Xor);
  CHECK(x.mask_spec == "weight:3");
  auto w = AdversaryConfig::parse("wrong-term:2");
  CHECK(w.kind == AdversaryConfig::Kind::WrongTerm);
  CHECK(w.wrong_term == 2);
  CHECK_THROWS_AS(AdversaryConfig::parse("nonsense"), std::invalid_argument);
}
