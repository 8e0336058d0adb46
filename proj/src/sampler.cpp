#include "lchzk/sampler.hpp"

#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

#include "lchzk/parallel.hpp"
#include "lchzk/protocol.hpp"

namespace lchzk {

namespace {

// k-qubit product state of one trap column.
DenseState trap_column_state(const std::vector<Trap>& column) {
  const int k = static_cast<int>(column.size());
  DenseState s(k);
  auto& amp = s.amplitudes();
  for (uint64_t idx = 0; idx < amp.size(); ++idx) {
    cx v{1.0, 0.0};
    for (int q = 0; q < k; ++q) {
      int bit = static_cast<int>((idx >> (k - 1 - q)) & 1);
      v *= trap_amplitudes(column[q])[bit];
    }
    amp[idx] = v;
  }
  return s;
}

// Sample a standard-basis outcome of C applied to the trap column.
BitString sample_trap_column(const CliffordCircuit& c, const std::vector<Trap>& column, Rng& rng) {
  DenseState s = trap_column_state(column);
  s.apply_circuit(c);
  return s.sample_measurement(rng);
}

// Logical outcome: Born distribution of measuring C_eff applied to the
// reduced witness state on the support.
BitString sample_logical_outcome(const EncodedWitness& enc, const LchTerm& term, Rng& rng) {
  const int k = term.k();
  const CliffordCircuit c_eff =
      (enc.t_level % 2 == 0) ? term.clifford : term.clifford.conjugated();
  Eigen::MatrixXcd rho = enc.logical.reduced_density(term.support);
  Eigen::MatrixXcd u = dense_unitary(c_eff);
  Eigen::MatrixXcd rotated = u * rho * u.adjoint();
  double r = rng.real01();
  double acc = 0.0;
  uint64_t pick = (uint64_t{1} << k) - 1;
  for (uint64_t v = 0; v < (uint64_t{1} << k); ++v) {
    acc += rotated(v, v).real();
    if (r < acc) {
      pick = v;
      break;
    }
  }
  return bitstring_of_value(pick, k);
}

}  // namespace

PadShift pad_shift(const CliffordCircuit& c_r, const std::vector<int>& support, const BitString& a,
                   const BitString& b, int n, long N) {
  const size_t total = static_cast<size_t>(2 * n) * N;
  if (a.size() != total || b.size() != total) throw std::invalid_argument("pad length mismatch");
  const int k = static_cast<int>(support.size());
  if (c_r.n != k) throw std::invalid_argument("circuit width must match support");

  PadShift out;
  out.c = a;
  out.d = b;
  for (long pos = 0; pos < 2 * N; ++pos) {
    PauliString p = PauliString::identity(k);
    for (int s = 0; s < k; ++s) {
      size_t idx = static_cast<size_t>(support[s]) * 2 * N + pos;
      p.set_x(s, a[idx]);
      p.set_z(s, b[idx]);
    }
    PauliString q = conjugate_pauli(c_r, p);
    out.alpha_power = (out.alpha_power + q.phase) & 3;
    for (int s = 0; s < k; ++s) {
      size_t idx = static_cast<size_t>(support[s]) * 2 * N + pos;
      out.c[idx] = q.x_bit(s);
      out.d[idx] = q.z_bit(s);
    }
  }
  return out;
}

BitString sample_unpadded_outcome(const EncodedWitness& enc, const LchTerm& term, Rng& rng) {
  const long N = enc.N();
  const int k = term.k();
  SteaneCode code(enc.t_level);

  BitString v = sample_logical_outcome(enc, term, rng);

  std::vector<BitString> code_strings(k);
  for (int s = 0; s < k; ++s) code_strings[s] = code.sample_codeword(v[s], rng);

  // Trap columns measured independently with the actual transversal C.
  std::vector<BitString> trap_strings(k, BitString(N, 0));
  for (long j = 0; j < N; ++j) {
    std::vector<Trap> column(k);
    for (int s = 0; s < k; ++s)
      column[s] = enc.key.traps[static_cast<size_t>(term.support[s]) * N + j];
    BitString z = sample_trap_column(term.clifford, column, rng);
    for (int s = 0; s < k; ++s) trap_strings[s][j] = z[s];
  }

  BitString u;
  u.reserve(static_cast<size_t>(2 * k) * N);
  for (int s = 0; s < k; ++s) {
    BitString pre = concat(code_strings[s], trap_strings[s]);
    BitString w(2 * N, 0);
    for (long pos = 0; pos < 2 * N; ++pos) w[enc.key.perm[pos]] = pre[pos];
    u.insert(u.end(), w.begin(), w.end());
  }
  return u;
}

std::map<std::string, double> challenge_distribution(const EncodedWitness& enc, const LchTerm& term,
                                                     size_t max_support) {
  const long N = enc.N();
  const int k = term.k();
  SteaneCode code(enc.t_level);
  const CliffordCircuit c_eff =
      (enc.t_level % 2 == 0) ? term.clifford : term.clifford.conjugated();

  // Logical outcome probabilities.
  Eigen::MatrixXcd rho = enc.logical.reduced_density(term.support);
  Eigen::MatrixXcd rot = dense_unitary(c_eff);
  Eigen::MatrixXcd rotated = rot * rho * rot.adjoint();

  // Per-column trap outcome distributions (independent across columns).
  std::vector<std::vector<std::pair<uint64_t, double>>> columns(N);
  for (long j = 0; j < N; ++j) {
    DenseState col(k);
    auto& amp = col.amplitudes();
    for (uint64_t idx = 0; idx < amp.size(); ++idx) {
      cx v{1.0, 0.0};
      for (int s = 0; s < k; ++s)
        v *= trap_amplitudes(
            enc.key.traps[static_cast<size_t>(term.support[s]) * N + j])[(idx >> (k - 1 - s)) & 1];
      amp[idx] = v;
    }
    col.apply_circuit(term.clifford);
    for (uint64_t b = 0; b < amp.size(); ++b) {
      double p = std::norm(col.amplitude(b));
      if (p > 1e-14) columns[j].push_back({b, p});
    }
  }

  PadShift shift = pad_shift(term.clifford, term.support, enc.key.pad_x, enc.key.pad_z, enc.key.n, N);

  std::map<std::string, double> out;
  const double code_weight = 1.0 / std::pow(8.0, k);  // uniform over base codewords per block

  // Enumerate trap columns recursively into z strings per block.
  std::vector<BitString> zs(k, BitString(N, 0));
  std::function<void(long, double, uint64_t, const std::vector<const BitString*>&)> rec_cols;

  rec_cols = [&](long j, double prob, uint64_t logical_v, const std::vector<const BitString*>& ys) {
    if (j == N) {
      // assemble u for this leaf
      BitString u;
      u.reserve(static_cast<size_t>(2 * k) * N);
      for (int s = 0; s < k; ++s) {
        BitString pre = concat(*ys[s], zs[s]);
        BitString w(2 * N, 0);
        for (long pos = 0; pos < 2 * N; ++pos) w[enc.key.perm[pos]] = pre[pos];
        for (long pos = 0; pos < 2 * N; ++pos)
          w[pos] = w[pos] ^ shift.c[static_cast<size_t>(term.support[s]) * 2 * N + pos];
        u.insert(u.end(), w.begin(), w.end());
      }
      out[bitstring_str(u)] += prob;
      if (out.size() > max_support) throw std::runtime_error("challenge distribution support too large");
      return;
    }
    for (const auto& [bits, p] : columns[j]) {
      for (int s = 0; s < k; ++s) zs[s][j] = static_cast<uint8_t>((bits >> (k - 1 - s)) & 1);
      rec_cols(j + 1, prob * p, logical_v, ys);
    }
  };

  if (enc.t_level != 1) throw std::invalid_argument("exact challenge distribution is a level-1 tool");
  for (uint64_t v = 0; v < (uint64_t{1} << k); ++v) {
    double pv = rotated(v, v).real();
    if (pv < 1e-14) continue;
    // all combinations of base codewords for the logical bits of v
    std::vector<const BitString*> ys(k, nullptr);
    std::function<void(int)> pick = [&](int s) {
      if (s == k) {
        rec_cols(0, pv * code_weight, v, ys);
        return;
      }
      for (const BitString& w : SteaneCode::base_words(static_cast<int>((v >> (k - 1 - s)) & 1))) {
        ys[s] = &w;
        pick(s + 1);
      }
    };
    pick(0);
  }
  return out;
}

ChallengeOutcome challenge_outcome(const EncodedWitness& enc, const LchTerm& term, Rng& rng) {
  const long N = enc.N();
  const int k = term.k();
  BitString u = sample_unpadded_outcome(enc, term, rng);
  PadShift shift = pad_shift(term.clifford, term.support, enc.key.pad_x, enc.key.pad_z, enc.key.n, N);
  for (int s = 0; s < k; ++s)
    for (long pos = 0; pos < 2 * N; ++pos)
      u[static_cast<size_t>(s) * 2 * N + pos] ^=
          shift.c[static_cast<size_t>(term.support[s]) * 2 * N + pos];

  ChallengeOutcome out;
  out.support = term.support;
  out.u = std::move(u);
  return out;
}

double acceptance_probability(const LchInstance& inst, const Eigen::MatrixXcd& rho, int term_index) {
  const LchTerm& t = inst.terms.at(term_index);
  Eigen::MatrixXcd reduced = partial_trace(rho, inst.n, t.support);
  return 1.0 - (t.local_projection() * reduced).trace().real();
}

double acceptance_probability(const LchInstance& inst, const DenseState& state, int term_index) {
  const LchTerm& t = inst.terms.at(term_index);
  Eigen::MatrixXcd reduced = state.reduced_density(t.support);
  return 1.0 - (t.local_projection() * reduced).trace().real();
}

int xor_attack_run(const EncodedWitness& enc, const LchTerm& term, const BitString& mask, Rng& rng) {
  const long N = enc.N();
  if (mask.size() != static_cast<size_t>(2 * term.k()) * N)
    throw std::invalid_argument("mask length mismatch");
  BitString w = sample_unpadded_outcome(enc, term, rng);
  return eval_R(term, enc.key.traps, enc.key.perm, bitstring_xor(w, mask), N) ? 1 : 0;
}

double attack_bound(int k, long K) {
  if (k < 1 || K < 0) throw std::invalid_argument("attack bound parameters");
  return std::pow(1.0 - std::pow(3.0, -(k + 1)), static_cast<double>(K) / k);
}

std::string trap_string(const CliffordCircuit& c, int j) {
  if (j < 0 || j >= c.n) throw std::out_of_range("trap string qubit index");
  PauliString g = conjugate_pauli(c.inverse(), PauliString::single(c.n, j, 'Z'));
  std::string t(c.n, '0');
  for (int q = 0; q < c.n; ++q) {
    bool xb = g.x_bit(q), zb = g.z_bit(q);
    if (xb && zb)
      t[q] = 'r';
    else if (xb)
      t[q] = '+';
    else
      t[q] = '0';  // Z or I: any standard basis direction works, |0> is picked
  }
  return t;
}

namespace {

// Does XORing `flip` onto standard-basis outcomes keep them inside the
// support of C|t_col>?  Stabilizer-state supports are affine, so the answer
// is the same for every outcome.
bool flip_preserves_support(const CliffordCircuit& c, const std::vector<Trap>& column,
                            const BitString& flip) {
  DenseState s = trap_column_state(column);
  s.apply_circuit(c);
  const uint64_t f = bitstring_value(flip);
  if (f == 0) return true;
  const auto& amp = s.amplitudes();
  constexpr double kEps = 1e-9;
  for (uint64_t b = 0; b < amp.size(); ++b) {
    bool in_before = std::abs(amp[b]) > kEps;
    bool in_after = std::abs(amp[b ^ f]) > kEps;
    if (in_before != in_after) return false;
  }
  return true;
}

}  // namespace

double estimate_beta(const BitString& mask, const LchTerm& term, long N, int t_level, long samples,
                     uint64_t seed, bool parallel) {
  const int k = term.k();
  if (mask.size() != static_cast<size_t>(2 * k) * N) throw std::invalid_argument("mask length mismatch");
  SteaneCode code(t_level);
  if (code.N() != N) throw std::invalid_argument("N does not match t level");

  std::vector<uint8_t> ok(samples, 0);
  run_samples(static_cast<uint64_t>(samples), seed, parallel, [&](uint64_t i, Rng& rng) {
    std::vector<int> perm(2 * N);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    // Pull the mask back through the permutation: pre-permutation wire w of
    // block s is flipped when the mask hits physical position perm[w].
    bool good = true;
    std::vector<BitString> code_flips(k), trap_flips(k);
    for (int s = 0; s < k && good; ++s) {
      const size_t base = static_cast<size_t>(s) * 2 * N;
      BitString m(N, 0), f(N, 0);
      for (long w = 0; w < N; ++w) m[w] = mask[base + perm[w]];
      for (long w = N; w < 2 * N; ++w) f[w - N] = mask[base + perm[w]];
      if (!is_zero(m)) {
        auto logical = code.logical_decode(m);
        if (!logical || *logical != 0) good = false;  // codeword class broken or logical flipped
      }
      code_flips[s] = std::move(m);
      trap_flips[s] = std::move(f);
    }
    if (good) {
      for (long j = 0; j < N && good; ++j) {
        BitString flip(k, 0);
        bool any = false;
        for (int s = 0; s < k; ++s) {
          flip[s] = trap_flips[s][j];
          any |= flip[s] != 0;
        }
        if (!any) continue;
        std::vector<Trap> column(k);
        for (int s = 0; s < k; ++s) column[s] = static_cast<Trap>(rng.below(3));
        if (!flip_preserves_support(term.clifford, column, flip)) good = false;
      }
    }
    ok[i] = good ? 1 : 0;
  });

  long hits = 0;
  for (uint8_t b : ok) hits += b;
  return static_cast<double>(hits) / static_cast<double>(samples);
}

BitString resolve_mask(const std::string& spec, long bits, Rng& rng) {
  if (spec == "zero") return BitString(bits, 0);
  if (spec.rfind("mask:", 0) == 0) {
    BitString m = bitstring_from(spec.substr(5));
    if (static_cast<long>(m.size()) != bits) throw std::invalid_argument("mask length mismatch");
    return m;
  }
  if (spec.rfind("weight:", 0) == 0) {
    long w = std::stol(spec.substr(7));
    if (w < 0 || w > bits) throw std::invalid_argument("mask weight out of range");
    std::vector<int> pos(bits);
    std::iota(pos.begin(), pos.end(), 0);
    rng.shuffle(pos);
    BitString m(bits, 0);
    for (long i = 0; i < w; ++i) m[pos[i]] = 1;
    return m;
  }
  throw std::invalid_argument("mask spec must be zero, mask:<bits> or weight:<w>");
}

AttackReport run_xor_attack_experiment(const DenseState& logical, const LchTerm& term, int t_level,
                                       const std::string& mask_spec, long samples, uint64_t seed,
                                       bool parallel) {
  SteaneCode code(t_level);
  const long N = code.N();
  const long bits = 2L * term.k() * N;

  std::vector<uint8_t> out(samples, 0);
  long min_weight = bits + 1;
  if (mask_spec.rfind("weight:", 0) == 0)
    min_weight = std::stol(mask_spec.substr(7));
  else {
    Rng probe(seed);
    min_weight = static_cast<long>(hamming_weight(resolve_mask(mask_spec, bits, probe)));
  }

  run_samples(static_cast<uint64_t>(samples), seed, parallel, [&](uint64_t i, Rng& rng) {
    EncodingKey key = sample_key(logical.n(), N, rng);
    EncodedWitness enc = encode_symbolic(logical, key, t_level);
    BitString mask = resolve_mask(mask_spec, bits, rng);
    out[i] = static_cast<uint8_t>(xor_attack_run(enc, term, mask, rng));
  });

  long hits = 0;
  for (uint8_t b : out) hits += b;
  AttackReport report;
  report.mask_spec = mask_spec;
  report.samples = samples;
  report.q_hat = static_cast<double>(hits) / static_cast<double>(samples);
  report.ci95 = 1.96 * std::sqrt(report.q_hat * (1.0 - report.q_hat) / static_cast<double>(samples));
  if (min_weight >= code.min_weight()) report.bound = attack_bound(term.k(), code.min_weight());
  return report;
}

nlohmann::json AttackReport::to_json() const {
  nlohmann::json j{{"v", mask_spec}, {"samples", samples}, {"q_hat", q_hat}, {"ci95", ci95}};
  if (bound)
    j["bound"] = *bound;
  else
    j["bound"] = nullptr;
  return j;
}

}  // namespace lchzk
