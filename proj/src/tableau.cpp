#include "lchzk/tableau.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "lchzk/dense.hpp"

namespace lchzk {

StabilizerState::StabilizerState(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 1) throw std::invalid_argument("stabilizer state needs at least one qubit");
  x_.assign(static_cast<size_t>(2 * n) * words_, 0);
  z_.assign(static_cast<size_t>(2 * n) * words_, 0);
  r_.assign(2 * n, 0);
  for (int q = 0; q < n; ++q) {
    xrow(q)[q >> 6] |= uint64_t{1} << (q & 63);       // destabilizer X_q
    zrow(n + q)[q >> 6] |= uint64_t{1} << (q & 63);   // stabilizer Z_q
  }
}

void StabilizerState::apply_h(int q) {
  const int w = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (int r = 0; r < 2 * n_; ++r) {
    uint64_t xb = xrow(r)[w] & m, zb = zrow(r)[w] & m;
    if (xb && zb) r_[r] ^= 1;
    if (bool(xb) != bool(zb)) {
      xrow(r)[w] ^= m;
      zrow(r)[w] ^= m;
    }
  }
}

void StabilizerState::apply_p(int q) {
  const int w = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (int r = 0; r < 2 * n_; ++r) {
    uint64_t xb = xrow(r)[w] & m, zb = zrow(r)[w] & m;
    if (xb && zb) r_[r] ^= 1;
    if (xb) zrow(r)[w] ^= m;
  }
}

void StabilizerState::apply_cnot(int control, int target) {
  const int wc = control >> 6, wt = target >> 6;
  const uint64_t mc = uint64_t{1} << (control & 63), mt = uint64_t{1} << (target & 63);
  for (int r = 0; r < 2 * n_; ++r) {
    bool xc = xrow(r)[wc] & mc, zc = zrow(r)[wc] & mc;
    bool xt = xrow(r)[wt] & mt, zt = zrow(r)[wt] & mt;
    if (xc && zt && (xt == zc)) r_[r] ^= 1;
    if (xc) xrow(r)[wt] ^= mt;
    if (zt) zrow(r)[wc] ^= mc;
  }
}

void StabilizerState::apply_x(int q) {
  const int w = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (int r = 0; r < 2 * n_; ++r)
    if (zrow(r)[w] & m) r_[r] ^= 1;
}

void StabilizerState::apply_z(int q) {
  const int w = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (int r = 0; r < 2 * n_; ++r)
    if (xrow(r)[w] & m) r_[r] ^= 1;
}

void StabilizerState::apply_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: apply_h(g.q0); break;
    case GateKind::P: apply_p(g.q0); break;
    case GateKind::CNOT: apply_cnot(g.q0, g.q1); break;
    case GateKind::X: apply_x(g.q0); break;
    case GateKind::Z: apply_z(g.q0); break;
  }
}

void StabilizerState::apply_circuit(const CliffordCircuit& c) {
  if (c.n != n_) throw std::invalid_argument("circuit width mismatch");
  for (const Gate& g : c.gates) apply_gate(g);
}

void StabilizerState::rowsum(int h, int i) {
  // Phase exponent of (row_i)*(row_h) accumulated in units of i; valid rows
  // always land back on a real sign.
  int acc = 2 * (r_[h] + r_[i]);
  const uint64_t* xi = xrow(i);
  const uint64_t* zi = zrow(i);
  uint64_t* xh = xrow(h);
  uint64_t* zh = zrow(h);
  for (int w = 0; w < words_; ++w) {
    uint64_t plus = (xi[w] & zi[w] & zh[w] & ~xh[w])     // Y * Z -> +i X
                    | (xi[w] & ~zi[w] & xh[w] & zh[w])   // X * Y -> +i Z
                    | (~xi[w] & zi[w] & xh[w] & ~zh[w]); // Z * X -> +i Y
    uint64_t minus = (xi[w] & zi[w] & xh[w] & ~zh[w])    // Y * X -> -i Z
                     | (xi[w] & ~zi[w] & ~xh[w] & zh[w]) // X * Z -> -i Y
                     | (~xi[w] & zi[w] & xh[w] & zh[w]); // Z * Y -> -i X
    acc += std::popcount(plus) - std::popcount(minus);
    xh[w] ^= xi[w];
    zh[w] ^= zi[w];
  }
  acc &= 3;
  r_[h] = static_cast<uint8_t>(acc >> 1);
}

void StabilizerState::row_copy(int dst, int src) {
  std::copy(xrow(src), xrow(src) + words_, xrow(dst));
  std::copy(zrow(src), zrow(src) + words_, zrow(dst));
  r_[dst] = r_[src];
}

void StabilizerState::row_set_z(int r, int q, int sign) {
  std::fill(xrow(r), xrow(r) + words_, 0);
  std::fill(zrow(r), zrow(r) + words_, 0);
  zrow(r)[q >> 6] |= uint64_t{1} << (q & 63);
  r_[r] = static_cast<uint8_t>(sign);
}

bool StabilizerState::z_is_deterministic(int q) const {
  const int w = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (int p = n_; p < 2 * n_; ++p)
    if (xrow(p)[w] & m) return false;
  return true;
}

int StabilizerState::measure_z(int q, Rng& rng) {
  if (q < 0 || q >= n_) throw std::out_of_range("measurement qubit index");
  const int w = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);

  int p = -1;
  for (int r = n_; r < 2 * n_; ++r) {
    if (xrow(r)[w] & m) {
      p = r;
      break;
    }
  }

  if (p >= 0) {
    // Random outcome.
    for (int r = 0; r < 2 * n_; ++r)
      if (r != p && (xrow(r)[w] & m)) rowsum(r, p);
    row_copy(p - n_, p);
    int outcome = rng.bit();
    row_set_z(p, q, outcome);
    return outcome;
  }

  // Deterministic: accumulate the matching stabilizers into a scratch row.
  std::vector<uint64_t> sx(words_, 0), sz(words_, 0);
  int acc = 0;
  for (int i = 0; i < n_; ++i) {
    if (!(xrow(i)[w] & m)) continue;
    const int src = i + n_;
    const uint64_t* xi = xrow(src);
    const uint64_t* zi = zrow(src);
    acc += 2 * r_[src];
    for (int ww = 0; ww < words_; ++ww) {
      uint64_t plus = (xi[ww] & zi[ww] & sz[ww] & ~sx[ww]) | (xi[ww] & ~zi[ww] & sx[ww] & sz[ww]) |
                      (~xi[ww] & zi[ww] & sx[ww] & ~sz[ww]);
      uint64_t minus = (xi[ww] & zi[ww] & sx[ww] & ~sz[ww]) | (xi[ww] & ~zi[ww] & ~sx[ww] & sz[ww]) |
                       (~xi[ww] & zi[ww] & sx[ww] & sz[ww]);
      acc += std::popcount(plus) - std::popcount(minus);
      sx[ww] ^= xi[ww];
      sz[ww] ^= zi[ww];
    }
  }
  return (acc & 3) >> 1;
}

BitString StabilizerState::measure_all(Rng& rng) {
  BitString out(n_);
  for (int q = 0; q < n_; ++q) out[q] = static_cast<uint8_t>(measure_z(q, rng));
  return out;
}

void StabilizerState::measure_enum(StabilizerState state, int next_qubit, double prob, BitString& prefix,
                                   std::map<std::string, double>& out, size_t max_support) const {
  if (next_qubit == n_) {
    out[bitstring_str(prefix)] += prob;
    return;
  }
  if (state.z_is_deterministic(next_qubit)) {
    Rng unused(0);
    int v = state.measure_z(next_qubit, unused);
    prefix.push_back(static_cast<uint8_t>(v));
    measure_enum(std::move(state), next_qubit + 1, prob, prefix, out, max_support);
    prefix.pop_back();
    return;
  }
  if (out.size() > max_support) throw std::runtime_error("measurement distribution support too large");
  for (int v = 0; v < 2; ++v) {
    StabilizerState branch = state;
    // Force the branch outcome by replacing the rng draw.
    const int w = next_qubit >> 6;
    const uint64_t m = uint64_t{1} << (next_qubit & 63);
    int p = -1;
    for (int r = branch.n_; r < 2 * branch.n_; ++r)
      if (branch.xrow(r)[w] & m) {
        p = r;
        break;
      }
    for (int r = 0; r < 2 * branch.n_; ++r)
      if (r != p && (branch.xrow(r)[w] & m)) branch.rowsum(r, p);
    branch.row_copy(p - branch.n_, p);
    branch.row_set_z(p, next_qubit, v);
    prefix.push_back(static_cast<uint8_t>(v));
    measure_enum(std::move(branch), next_qubit + 1, prob * 0.5, prefix, out, max_support);
    prefix.pop_back();
  }
}

std::map<std::string, double> StabilizerState::measurement_distribution(size_t max_support) const {
  std::map<std::string, double> out;
  BitString prefix;
  measure_enum(*this, 0, 1.0, prefix, out, max_support);
  return out;
}

StabilizerState StabilizerState::embed(const StabilizerState& s, int n_total, const std::vector<int>& positions) {
  if (static_cast<int>(positions.size()) != s.n_) throw std::invalid_argument("embed positions size mismatch");
  StabilizerState out(n_total);
  // Fresh |0> rows already occupy every qubit; overwrite the embedded block.
  // Destabilizer/stabilizer row q of `s` becomes row positions-projected.
  std::vector<bool> used(n_total, false);
  for (int p : positions) {
    if (p < 0 || p >= n_total) throw std::out_of_range("embed position");
    if (used[p]) throw std::invalid_argument("duplicate embed position");
    used[p] = true;
  }
  for (int q = 0; q < s.n_; ++q) {
    const int dst_d = positions[q];
    const int dst_s = n_total + positions[q];
    // zero the default rows for this qubit
    std::fill(out.xrow(dst_d), out.xrow(dst_d) + out.words_, 0);
    std::fill(out.zrow(dst_d), out.zrow(dst_d) + out.words_, 0);
    std::fill(out.xrow(dst_s), out.xrow(dst_s) + out.words_, 0);
    std::fill(out.zrow(dst_s), out.zrow(dst_s) + out.words_, 0);
    for (int c = 0; c < s.n_; ++c) {
      int pc = positions[c];
      if (s.xbit(q, c)) out.xrow(dst_d)[pc >> 6] |= uint64_t{1} << (pc & 63);
      if (s.zbit(q, c)) out.zrow(dst_d)[pc >> 6] |= uint64_t{1} << (pc & 63);
      if (s.xbit(q + s.n_, c)) out.xrow(dst_s)[pc >> 6] |= uint64_t{1} << (pc & 63);
      if (s.zbit(q + s.n_, c)) out.zrow(dst_s)[pc >> 6] |= uint64_t{1} << (pc & 63);
    }
    out.r_[dst_d] = s.r_[q];
    out.r_[dst_s] = s.r_[q + s.n_];
  }
  return out;
}

void StabilizerState::permute_qubits(const std::vector<int>& mapping) {
  if (static_cast<int>(mapping.size()) != n_) throw std::invalid_argument("qubit mapping size mismatch");
  std::vector<uint64_t> nx(x_.size(), 0), nz(z_.size(), 0);
  for (int r = 0; r < 2 * n_; ++r) {
    uint64_t* dst_x = &nx[static_cast<size_t>(r) * words_];
    uint64_t* dst_z = &nz[static_cast<size_t>(r) * words_];
    for (int q = 0; q < n_; ++q) {
      int t = mapping[q];
      if (xbit(r, q)) dst_x[t >> 6] |= uint64_t{1} << (t & 63);
      if (zbit(r, q)) dst_z[t >> 6] |= uint64_t{1} << (t & 63);
    }
  }
  x_ = std::move(nx);
  z_ = std::move(nz);
}

std::vector<PauliString> StabilizerState::stabilizer_generators() const {
  std::vector<PauliString> rows;
  rows.reserve(n_);
  for (int r = n_; r < 2 * n_; ++r) {
    PauliString p = PauliString::identity(n_);
    std::copy(xrow(r), xrow(r) + words_, p.x.begin());
    std::copy(zrow(r), zrow(r) + words_, p.z.begin());
    // Rows store the sign of the Hermitian element; every Y position carries
    // an internal i in the i^phase X^x Z^z convention.
    int ycount = 0;
    for (int w = 0; w < words_; ++w) ycount += std::popcount(p.x[w] & p.z[w]);
    p.phase = (2 * r_[r] + ycount) & 3;
    rows.push_back(std::move(p));
  }
  return rows;
}

std::vector<PauliString> StabilizerState::canonical_stabilizers() const {
  std::vector<PauliString> rows = stabilizer_generators();
  const int m = static_cast<int>(rows.size());
  int rank = 0;
  auto bit_at = [&](const PauliString& p, int col) {
    return col < n_ ? p.x_bit(col) : p.z_bit(col - n_);
  };
  for (int col = 0; col < 2 * n_ && rank < m; ++col) {
    int pivot = -1;
    for (int r = rank; r < m; ++r)
      if (bit_at(rows[r], col)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < m; ++r)
      if (r != rank && bit_at(rows[r], col)) rows[r] = pauli_multiply(rows[r], rows[rank]);
    ++rank;
  }
  return rows;
}

bool StabilizerState::same_state(const StabilizerState& other) const {
  if (n_ != other.n_) return false;
  return canonical_stabilizers() == other.canonical_stabilizers();
}

int StabilizerState::pauli_expectation(const PauliString& p) const {
  if (p.n != n_) throw std::invalid_argument("pauli width mismatch");
  std::vector<PauliString> rows = canonical_stabilizers();
  for (const PauliString& g : rows)
    if (!p.commutes_with(g)) return 0;
  // The stabilizer group is maximal abelian, so p lies in it up to sign;
  // reduce p by the canonical rows to recover the sign.
  PauliString residue = p;
  auto bit_at = [&](const PauliString& s, int col) {
    return col < n_ ? s.x_bit(col) : s.z_bit(col - n_);
  };
  for (const PauliString& g : rows) {
    int lead = -1;
    for (int col = 0; col < 2 * n_ && lead < 0; ++col)
      if (bit_at(g, col)) lead = col;
    if (lead >= 0 && bit_at(residue, lead)) residue = pauli_multiply(residue, g);
  }
  if (!residue.is_identity_up_to_phase()) return 0;
  return residue.phase == 0 ? 1 : -1;
}

Eigen::MatrixXcd StabilizerState::reduced_density(const std::vector<int>& keep) const {
  const int k = static_cast<int>(keep.size());
  const uint64_t dim = uint64_t{1} << k;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  // rho = 2^-k sum_P <P> P over the 4^k local Paulis.
  const char kinds[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<int> digits(k, 0);
  for (uint64_t combo = 0; combo < (uint64_t{1} << (2 * k)); ++combo) {
    PauliString big = PauliString::identity(n_);
    PauliString small = PauliString::identity(k);
    for (int s = 0; s < k; ++s) {
      int d = static_cast<int>((combo >> (2 * s)) & 3);
      if (d == 0) continue;
      char kind = kinds[d];
      PauliString factor_big = PauliString::single(n_, keep[s], kind);
      PauliString factor_small = PauliString::single(k, s, kind);
      big = pauli_multiply(big, factor_big);
      small = pauli_multiply(small, factor_small);
    }
    int e = pauli_expectation(big);
    if (e == 0) continue;
    // big and small share the factor sequence, so dense_pauli(small) is the
    // same Hermitian observable restricted to the kept qubits.
    rho += (static_cast<double>(e) / static_cast<double>(dim)) * dense_pauli(small);
  }
  return rho;
}

}  // namespace lchzk
