#include "lchzk/selftest.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "lchzk/analysis.hpp"
#include "lchzk/lch.hpp"
#include "lchzk/parallel.hpp"
#include "lchzk/protocol.hpp"
#include "lchzk/sampler.hpp"
#include "lchzk/steane.hpp"

namespace lchzk {

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << (note.str().empty() ? "" : "; ") << what;
    }
  }
};

CriterionResult finish(int index, const std::string& name, Checker& c, const std::string& summary) {
  CriterionResult r;
  r.index = index;
  r.name = name;
  r.pass = c.ok;
  r.detail = c.ok ? summary : c.note.str();
  return r;
}

// 2-qubit circuit accepting |11> with certainty.
VerificationCircuit accepting_circuit() {
  VerificationCircuit v;
  v.n_qubits = 2;
  v.witness_qubits = 2;
  v.output_qubit = 0;
  v.gates.push_back({VerificationGate::Kind::LambdaP, 0, 1});
  v.gates.push_back({VerificationGate::Kind::LambdaP, 1, 0});
  return v;
}

// Three arity-2 terms whose projections are symmetric two-qubit states; the
// singlet witness is orthogonal to every symmetric state, so it passes all
// challenges with certainty while the bases run over I, H and HP.
LchInstance symmetric_trio_instance() {
  LchInstance inst;
  inst.n = 2;
  inst.k = 5;
  inst.p = 20;
  inst.q = 100;

  LchTerm t1;  // |00><00|
  t1.clifford = CliffordCircuit(2);
  t1.support = {0, 1};
  inst.terms.push_back(t1);

  LchTerm t2;  // |++><++|
  t2.clifford = CliffordCircuit(2);
  t2.clifford.h(0).h(1);
  t2.support = {0, 1};
  inst.terms.push_back(t2);

  LchTerm t3;  // circular polarization on both qubits
  t3.clifford = CliffordCircuit(2);
  t3.clifford.p(0).p(1).h(0).h(1);
  t3.support = {0, 1};
  inst.terms.push_back(t3);
  inst.validate();
  return inst;
}

DenseState singlet() {
  DenseState s(2);
  auto& amp = s.amplitudes();
  const double inv = 1.0 / std::sqrt(2.0);
  amp[0] = 0.0;
  amp[1] = inv;
  amp[2] = -inv;
  amp[3] = 0.0;
  return s;
}

double binom_sigma(double p, long n) { return std::sqrt(std::max(p * (1.0 - p), 1e-12) / n); }

}  // namespace

CriterionResult criterion_gadget_identities() {
  Checker c;
  for (auto kind : {VerificationGate::Kind::LambdaP, VerificationGate::Kind::HH}) {
    auto circuits = decompose_propagation(kind);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(8, 8);
    for (const CliffordCircuit& ci : circuits) {
      Eigen::MatrixXcd u = dense_unitary(ci);
      Eigen::VectorXcd vec = u.adjoint().col(0);
      sum += vec * vec.adjoint();
    }
    double err = (sum - propagation_projector(kind)).cwiseAbs().maxCoeff();
    c.expect(err <= 1e-12, "gadget sum off by " + std::to_string(err));
  }

  // the four HH circuits hit the stated vectors exactly
  const double half = 0.5;
  const double expected[4][8] = {
      {half, 0, 0, -half, 0, -half, -half, 0},
      {half, 0, 0, half, -half, 0, 0, -half},
      {0, half, -half, 0, 0, half, -half, 0},
      {0, half, half, 0, -half, 0, 0, half},
  };
  auto preps = propagation_preparations(VerificationGate::Kind::HH);
  for (int i = 0; i < 4; ++i) {
    DenseState s(3);
    s.apply_circuit(preps[i]);
    for (int b = 0; b < 8; ++b) {
      c.expect(std::abs(s.amplitude(b) - cx{expected[i][b], 0.0}) <= 1e-12,
               "HH preparation vector mismatch");
    }
  }
  return finish(1, "gadget identities", c, "both gate gadgets sum exactly; HH vectors exact");
}

CriterionResult criterion_reduction_sanity() {
  Checker c;
  VerificationCircuit v = accepting_circuit();
  LchInstance inst = compile(v, 10);
  double ground = ground_energy(inst);
  c.expect(ground <= std::pow(2.0, -10), "ground energy above 2^-10");

  DenseState perfect = history_state(v, DenseState::basis(2, bitstring_from("11")));
  double e_perfect = energy(inst, perfect);
  c.expect(std::abs(e_perfect) <= 1e-9, "perfect history state energy nonzero");

  // partially rejected witness: energy equals the rejection rate over T+1
  DenseState partial(2);
  partial.apply_h(0);
  partial.apply_x(1);
  DenseState hist = history_state(v, partial);
  double expected = 0.5 / (v.T() + 1);
  c.expect(std::abs(energy(inst, hist) - expected) <= 1e-9,
           "history energy does not match the rejection rate");

  std::ostringstream s;
  s << "ground energy " << ground << ", history energies exact";
  return finish(2, "reduction sanity", c, s.str());
}

CriterionResult criterion_steane_properties() {
  Checker c;
  // codeword tables, stated verbatim
  const char* words0[8] = {"0000000", "0001111", "0110011", "0111100",
                           "1010101", "1011010", "1100110", "1101001"};
  const char* words1[8] = {"0010110", "0011001", "0100101", "0101010",
                           "1000011", "1001100", "1110000", "1111111"};
  for (int i = 0; i < 8; ++i) {
    c.expect(SteaneCode::base_words(0)[i] == bitstring_from(words0[i]), "D0 table mismatch");
    c.expect(SteaneCode::base_words(1)[i] == bitstring_from(words1[i]), "D1 table mismatch");
  }

  // minimum nonzero weight 3, by exhaustive scan
  long best = 7;
  for (int b = 0; b < 2; ++b)
    for (const BitString& w : SteaneCode::base_words(b)) {
      long wt = static_cast<long>(hamming_weight(w));
      if (wt > 0) best = std::min(best, wt);
    }
  c.expect(best == 3, "minimum nonzero weight is not 3");
  c.expect(SteaneCode(1).min_distance() == 3, "level-1 distance");
  c.expect(SteaneCode(2).min_distance() == 9, "level-2 distance");

  // parity split
  for (const BitString& w : SteaneCode::base_words(0)) c.expect(parity(w) == 0, "even parity");
  for (const BitString& w : SteaneCode::base_words(1)) c.expect(parity(w) == 1, "odd parity");

  // transversality as exact tableau equality at both levels
  for (int t = 1; t <= 2; ++t) {
    SteaneCode code(t);
    const long N = code.N();
    auto encode_blocks = [&](const StabilizerState& logical) {
      const int n = logical.n();
      std::vector<int> leaders(n);
      for (int i = 0; i < n; ++i) leaders[i] = static_cast<int>(i * N);
      StabilizerState out = StabilizerState::embed(logical, static_cast<int>(n * N), leaders);
      CliffordCircuit enc = code.encoder_circuit();
      for (int i = 0; i < n; ++i) {
        std::vector<int> map(N);
        for (long w = 0; w < N; ++w) map[w] = static_cast<int>(i * N + w);
        out.apply_circuit(enc.remapped(static_cast<int>(n * N), map));
      }
      return out;
    };
    auto transversal = [&](StabilizerState& s, const CliffordCircuit& g) {
      for (long j = 0; j < N; ++j) {
        std::vector<int> map(g.n);
        for (int q = 0; q < g.n; ++q) map[q] = static_cast<int>(q * N + j);
        s.apply_circuit(g.remapped(s.n(), map));
      }
    };
    std::vector<CliffordCircuit> gates;
    {
      CliffordCircuit h(1), p(1), cn(2);
      h.h(0);
      p.p(0);
      cn.cnot(0, 1);
      gates = {h, p, cn};
    }
    for (const CliffordCircuit& g : gates) {
      for (int input = 0; input < 3; ++input) {
        StabilizerState logical(g.n);
        if (input == 1) logical.apply_h(0);
        if (input == 2) {
          logical.apply_h(0);
          logical.apply_p(0);
        }
        StabilizerState lhs = logical;
        lhs.apply_circuit(g);
        StabilizerState route_a = encode_blocks(lhs);
        StabilizerState route_b = encode_blocks(logical);
        CliffordCircuit phys = (t % 2 == 1) ? g.conjugated() : g;
        transversal(route_b, phys);
        c.expect(route_a.same_state(route_b), "transversality equality failed");
      }
    }
  }
  return finish(3, "Steane code properties", c,
                "tables verbatim, distance 3 exhaustive, parity split, transversality exact");
}

CriterionResult criterion_sampler_equivalence(const SelftestOptions&) {
  Checker c;
  Rng rng(0xFEEDF00D);
  std::vector<CliffordCircuit> bases{CliffordCircuit(1)};
  {
    CliffordCircuit h(1), hp(1);
    h.h(0);
    hp.h(0);
    hp.p(0);
    bases.push_back(h);
    bases.push_back(hp);
    bases.push_back(random_clifford(1, rng, 21));
  }
  std::vector<CliffordCircuit> witnesses{CliffordCircuit(1)};
  {
    CliffordCircuit x(1), h(1), hp(1);
    x.x(0);
    h.h(0);
    hp.h(0);
    hp.p(0);
    witnesses.push_back(x);
    witnesses.push_back(h);
    witnesses.push_back(hp);
  }

  int checked = 0;
  for (const auto& wc : witnesses) {
    for (const auto& basis : bases) {
      EncodingKey key = sample_key(1, 7, rng);
      LchTerm term;
      term.clifford = basis;
      term.support = {0};

      StabilizerState logical_tab(1);
      logical_tab.apply_circuit(wc);
      StabilizerState enc = encode_physical(logical_tab, key, 1);
      for (long j = 0; j < 14; ++j)
        enc.apply_circuit(basis.remapped(14, {static_cast<int>(j)}));
      auto physical = enc.measurement_distribution();

      DenseState logical_dense(1);
      logical_dense.apply_circuit(wc);
      auto symbolic = challenge_distribution(encode_symbolic(logical_dense, key, 1), term);

      c.expect(physical.size() == symbolic.size(), "support size mismatch");
      for (const auto& [u, p] : physical) {
        auto it = symbolic.find(u);
        if (it == symbolic.end() || std::abs(it->second - p) > 1e-9) {
          c.expect(false, "distribution mismatch on " + u);
          break;
        }
      }
      ++checked;
    }
  }
  std::ostringstream s;
  s << checked << " witness/basis pairs, exhaustive support equality";
  return finish(4, "sampler/physical equivalence", c, s.str());
}

CriterionResult criterion_completeness_equality() {
  Checker c;
  VerificationCircuit v = accepting_circuit();
  LchInstance inst = compile(v, 10);
  DenseState witness = history_state(v, DenseState::basis(2, bitstring_from("11")));

  double exact = exact_acceptance_probability(inst, witness, 2);

  const int len = challenge_length(inst.m());
  Eigen::MatrixXcd rho = witness.density();
  double avg = 0.0;
  for (uint64_t rv = 0; rv < (uint64_t{1} << len); ++rv) {
    int j = select_term(bitstring_of_value(rv, len), inst.m()) - 1;
    avg += acceptance_probability(inst, rho, j);
  }
  avg /= static_cast<double>(uint64_t{1} << len);

  c.expect(std::abs(exact - avg) <= 1e-9, "protocol acceptance differs from the energy average");
  c.expect(exact >= 1.0 - std::pow(2.0, -10), "acceptance below 1 - 2^-p");
  std::ostringstream s;
  s << "acceptance " << exact << " equals the challenge-averaged energies";
  return finish(5, "completeness equality", c, s.str());
}

CriterionResult criterion_soundness_inequality(const SelftestOptions& opt) {
  Checker c;
  // channel facts at N = 5
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
  zero(0, 0) = 1.0;
  double adj_err = (xi_adjoint(zero, 5) - delta_projector(5, 0)).cwiseAbs().maxCoeff();
  c.expect(adj_err <= 1e-12, "adjoint does not map |0><0| to the parity projector");
  c.expect(min_eigenvalue(xi_choi(5)) >= -1e-12, "Choi matrix not PSD at N = 5");

  // 100+ random pure adversarial states at one logical qubit, N = 7
  LchInstance inst;
  inst.n = 1;
  inst.k = 5;
  inst.p = 10;
  inst.q = 2;
  {
    LchTerm t;
    t.clifford = CliffordCircuit(1);
    t.support = {0};
    inst.terms.push_back(t);
    LchTerm t2;
    t2.clifford = CliffordCircuit(1);
    t2.clifford.h(0);
    t2.support = {0};
    inst.terms.push_back(t2);
  }

  Rng rng(opt.seed ^ 0x50554e44);
  int cases = 0;
  double min_slack = 1.0;
  for (int trial = 0; trial < 110; ++trial) {
    EncodingKey key = sample_key(1, 7, rng);
    DenseState state(14);
    auto& amp = state.amplitudes();
    double norm = 0.0;
    for (auto& a : amp) {
      a = cx{rng.real01() - 0.5, rng.real01() - 0.5};
      norm += std::norm(a);
    }
    for (auto& a : amp) a /= std::sqrt(norm);
    PureEnsemble ens;
    ens.parts.push_back({1.0, state});
    int j = static_cast<int>(rng.below(inst.m()));
    SoundnessResult r = soundness_check(inst, ens, key, j);
    min_slack = std::min(min_slack, r.reject_prob - r.lower_bound);
    c.expect(r.reject_prob >= r.lower_bound - 1e-9, "soundness inequality violated");
    ++cases;
  }
  std::ostringstream s;
  s << cases << " adversarial states, min slack " << min_slack << ", Choi PSD, adjoint exact";
  return finish(6, "soundness inequality", c, s.str());
}

CriterionResult criterion_trap_lemma(const SelftestOptions& opt) {
  Checker c;
  Rng rng(opt.seed ^ 0x5452u);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int k = 1 + static_cast<int>(rng.below(3));
    CliffordCircuit circuit = random_clifford(k, rng, 25);
    for (int j = 0; j < k; ++j) {
      std::string t = trap_string(circuit, j);
      DenseState s(k);
      auto& amp = s.amplitudes();
      for (uint64_t idx = 0; idx < amp.size(); ++idx) {
        cx v{1.0, 0.0};
        for (int q = 0; q < k; ++q)
          v *= trap_amplitudes(trap_from_char(t[q]))[(idx >> (k - 1 - q)) & 1];
        amp[idx] = v;
      }
      s.apply_circuit(circuit);
      Eigen::MatrixXcd rho = s.reduced_density({j});
      double minor_weight = std::min(rho(0, 0).real(), rho(1, 1).real());
      c.expect(std::abs(rho(0, 1)) <= 1e-10 && minor_weight <= 1e-10,
               "qubit not left in a standard basis state");
      ++checked;
    }
  }
  std::ostringstream s;
  s << checked << " (circuit, qubit) pairs verified densely";
  return finish(7, "trap string lemma", c, s.str());
}

CriterionResult criterion_xor_attack_bound(const SelftestOptions& opt) {
  Checker c;
  const long samples = std::max(1000L, static_cast<long>(10000 * opt.sample_scale));

  // arity 1: identity basis, witness passing with certainty
  {
    DenseState witness = DenseState::basis(1, bitstring_from("1"));
    LchTerm term;
    term.clifford = CliffordCircuit(1);
    term.support = {0};
    AttackReport heavy = run_xor_attack_experiment(witness, term, 1, "weight:3", samples,
                                                   opt.seed ^ 1, opt.parallel);
    double sigma = binom_sigma(heavy.q_hat, samples);
    c.expect(heavy.bound.has_value() && heavy.q_hat <= *heavy.bound + 3 * sigma,
             "arity-1 heavy mask above the bound");
  }

  // arity 2: Hadamard-pair basis, singlet witness passes with certainty
  {
    DenseState witness = singlet();
    LchTerm term;
    term.clifford = CliffordCircuit(2);
    term.clifford.h(0).h(1);
    term.support = {0, 1};
    AttackReport heavy = run_xor_attack_experiment(witness, term, 1, "weight:3", samples,
                                                   opt.seed ^ 2, opt.parallel);
    double sigma = binom_sigma(heavy.q_hat, samples);
    c.expect(heavy.bound.has_value() && heavy.q_hat <= *heavy.bound + 3 * sigma,
             "arity-2 heavy mask above the bound");

    // single-bit mask: damping ratio independent of the witness
    BitString mask(28, 0);
    mask[11] = 1;
    auto damping = [&](const DenseState& w, uint64_t seed) {
      AttackReport masked = run_xor_attack_experiment(w, term, 1, "mask:" + bitstring_str(mask),
                                                      samples, seed, opt.parallel);
      AttackReport base =
          run_xor_attack_experiment(w, term, 1, "zero", samples, seed + 13, opt.parallel);
      return std::pair<double, double>{masked.q_hat / base.q_hat,
                                       binom_sigma(masked.q_hat, samples) / base.q_hat +
                                           binom_sigma(base.q_hat, samples)};
    };
    DenseState other = DenseState::basis(2, bitstring_from("01"));  // pass probability 3/4
    auto [r1, s1] = damping(witness, opt.seed ^ 3);
    auto [r2, s2] = damping(other, opt.seed ^ 4);
    c.expect(std::abs(r1 - r2) <= 3 * std::sqrt(s1 * s1 + s2 * s2) + 1e-6,
             "arity-2 damping ratio depends on the witness");
  }

  // arity 1 single-bit ratio across two distinct equal-pass witnesses
  {
    LchTerm term;
    term.clifford = CliffordCircuit(1);
    term.support = {0};
    BitString mask(14, 0);
    mask[6] = 1;
    DenseState plus(1);
    plus.apply_h(0);
    DenseState iplus(1);
    iplus.apply_h(0);
    iplus.apply_p(0);
    auto rate = [&](const DenseState& w, const std::string& spec, uint64_t seed) {
      return run_xor_attack_experiment(w, term, 1, spec, samples, seed, opt.parallel).q_hat;
    };
    double r1 = rate(plus, "mask:" + bitstring_str(mask), opt.seed ^ 5) /
                rate(plus, "zero", opt.seed ^ 6);
    double r2 = rate(iplus, "mask:" + bitstring_str(mask), opt.seed ^ 7) /
                rate(iplus, "zero", opt.seed ^ 8);
    c.expect(std::abs(r1 - r2) <= 6.0 / std::sqrt(static_cast<double>(samples)) + 0.02,
             "arity-1 damping ratio depends on the witness");
  }
  std::ostringstream s;
  s << "bounds hold at arity 1 and 2; damping ratios witness-independent (" << samples
    << " samples each)";
  return finish(8, "XOR attack bound", c, s.str());
}

CriterionResult criterion_zk_indistinguishability(const SelftestOptions& opt) {
  Checker c;
  // 3x the nominal budget: the empirical TV of two identical distributions
  // is pure noise of order sqrt(buckets/samples), and the margin against the
  // 0.03 threshold should not ride on it.
  const long samples = std::max(3000L, static_cast<long>(30000 * opt.sample_scale));
  LchInstance inst = symmetric_trio_instance();
  WitnessSpec witness = WitnessSpec::from_state(singlet());

  const char* adversaries[] = {"honest", "xor:weight:1", "xor:weight:9", "wrong-term:2"};
  std::ostringstream tvlist;
  uint64_t adv_index = 0;
  for (const char* adv : adversaries) {
    DistributionReport report = compare_real_vs_simulated(
        inst, witness, AdversaryConfig::parse(adv), 2, samples,
        mix_seed(opt.seed, 0x2b2b + adv_index++), opt.parallel);
    tvlist << adv << "=" << report.tv << " ";
    c.expect(report.tv <= 0.03, std::string("TV above 0.03 for adversary ") + adv);
  }

  // power check: a pass-probability gap of 0.5 must be visible
  DenseState weak(2);
  weak.apply_h(1);  // |0+> passes the |00><00| term with probability 1/2
  DistributionReport broken = compare_real_vs_simulated(
      inst, WitnessSpec::from_state(weak), AdversaryConfig::honest(), 2, samples,
      opt.seed ^ 0x7777, opt.parallel);
  c.expect(broken.tv >= 0.2, "comparison lacks power against a broken witness");

  std::ostringstream s;
  s << "TV " << tvlist.str() << "| broken-config TV " << broken.tv;
  return finish(9, "transcript indistinguishability", c, s.str());
}

CriterionResult criterion_protocol_hygiene(const SelftestOptions& opt) {
  Checker c;
  Rng rng(opt.seed ^ 0x48594745);

  // commitment round trip and toy-scale binding
  auto salt = rng.bytes(kSaltBytes);
  std::set<std::string> seen;
  for (int m = 0; m < 256; ++m) {
    Commitment z = commit({static_cast<uint8_t>(m)}, salt, CommitmentBackend::Hash);
    c.expect(verify_open(z, {static_cast<uint8_t>(m)}, salt, CommitmentBackend::Hash),
             "commitment fails to open");
    c.expect(seen.insert(z.hex()).second, "commitment collision on the 8-bit domain");
  }

  // coin flip uniformity at the 1% level
  {
    std::map<std::string, long> counts;
    const long total = 10000;
    for (long i = 0; i < total; ++i)
      counts[bitstring_str(coin_flip(3, rng, rng, CommitmentBackend::Hash, nullptr).r)]++;
    double stat = 0.0;
    for (int v = 0; v < 8; ++v) {
      double expect = total / 8.0;
      double obs = static_cast<double>(counts[bitstring_str(bitstring_of_value(v, 3))]);
      stat += (obs - expect) * (obs - expect) / expect;
    }
    c.expect(stat < 18.475, "coin flip fails the 1% uniformity test");
  }

  // replay determinism: byte-identical transcripts under a fixed seed
  {
    LchInstance inst = symmetric_trio_instance();
    WitnessSpec witness = WitnessSpec::from_state(singlet());
    ProtocolOptions options;
    options.t_level = 2;
    Rng r1(314159), r2(314159);
    Transcript a = run_protocol(inst, witness, AdversaryConfig::honest(), options, r1);
    Transcript b = run_protocol(inst, witness, AdversaryConfig::honest(), options, r2);
    c.expect(a.to_jsonl() == b.to_jsonl(), "transcripts differ under the same seed");
    c.expect(transcript_order_valid(a), "honest transcript fails the order check");
  }
  return finish(10, "protocol hygiene", c,
                "commitments bind at toy scale, coin flips uniform, replays byte-identical");
}

std::vector<CriterionResult> run_acceptance_criteria(const SelftestOptions& opt) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_gadget_identities());
  out.push_back(criterion_reduction_sanity());
  out.push_back(criterion_steane_properties());
  out.push_back(criterion_sampler_equivalence(opt));
  out.push_back(criterion_completeness_equality());
  out.push_back(criterion_soundness_inequality(opt));
  out.push_back(criterion_trap_lemma(opt));
  out.push_back(criterion_xor_attack_bound(opt));
  out.push_back(criterion_zk_indistinguishability(opt));
  out.push_back(criterion_protocol_hygiene(opt));
  return out;
}

}  // namespace lchzk
