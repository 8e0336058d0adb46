#include "lchzk/encoding.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lchzk/analysis.hpp"

namespace lchzk {

char trap_char(Trap t) {
  switch (t) {
    case Trap::Zero: return '0';
    case Trap::Plus: return '+';
    case Trap::MinusI: return 'r';
  }
  return '?';
}

Trap trap_from_char(char c) {
  switch (c) {
    case '0': return Trap::Zero;
    case '+': return Trap::Plus;
    case 'r': return Trap::MinusI;
    default: throw std::invalid_argument("trap symbol must be one of 0, +, r");
  }
}

std::array<cx, 2> trap_amplitudes(Trap t) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (t) {
    case Trap::Zero: return {cx{1.0, 0.0}, cx{0.0, 0.0}};
    case Trap::Plus: return {cx{s, 0.0}, cx{s, 0.0}};
    case Trap::MinusI: return {cx{s, 0.0}, cx{0.0, -s}};
  }
  return {};
}

void EncodingKey::validate() const {
  if (n < 1 || N < 1) throw std::invalid_argument("key dimensions must be positive");
  if (static_cast<long>(traps.size()) != static_cast<long>(n) * N)
    throw std::invalid_argument("trap string length mismatch");
  if (static_cast<long>(perm.size()) != 2 * N) throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || v >= static_cast<int>(perm.size()) || seen[v])
      throw std::invalid_argument("perm is not a permutation");
    seen[v] = true;
  }
  if (static_cast<long>(pad_x.size()) != 2 * static_cast<long>(n) * N ||
      static_cast<long>(pad_z.size()) != 2 * static_cast<long>(n) * N)
    throw std::invalid_argument("pad length mismatch");
}

std::string EncodingKey::trap_string() const {
  std::string s;
  s.reserve(traps.size());
  for (Trap t : traps) s.push_back(trap_char(t));
  return s;
}

std::vector<int> EncodingKey::perm_inverse() const {
  std::vector<int> inv(perm.size());
  for (size_t w = 0; w < perm.size(); ++w) inv[perm[w]] = static_cast<int>(w);
  return inv;
}

EncodingKey sample_key(int n, long N, Rng& rng) {
  EncodingKey key;
  key.n = n;
  key.N = N;
  key.traps.resize(static_cast<size_t>(n) * N);
  for (auto& t : key.traps) t = static_cast<Trap>(rng.below(3));
  key.perm.resize(2 * N);
  for (long i = 0; i < 2 * N; ++i) key.perm[i] = static_cast<int>(i);
  rng.shuffle(key.perm);
  key.pad_x.resize(static_cast<size_t>(2 * n) * N);
  key.pad_z.resize(static_cast<size_t>(2 * n) * N);
  for (auto& b : key.pad_x) b = static_cast<uint8_t>(rng.bit());
  for (auto& b : key.pad_z) b = static_cast<uint8_t>(rng.bit());
  key.salt = rng.bytes(kSaltBytes);
  return key;
}

EncodingKey trivial_key(int n, long N) {
  EncodingKey key;
  key.n = n;
  key.N = N;
  key.traps.assign(static_cast<size_t>(n) * N, Trap::Zero);
  key.perm.resize(2 * N);
  for (long i = 0; i < 2 * N; ++i) key.perm[i] = static_cast<int>(i);
  key.pad_x.assign(static_cast<size_t>(2 * n) * N, 0);
  key.pad_z.assign(static_cast<size_t>(2 * n) * N, 0);
  key.salt.assign(kSaltBytes, 0);
  return key;
}

EncodedWitness encode_symbolic(const DenseState& logical, const EncodingKey& key, int t_level) {
  key.validate();
  if (logical.n() != key.n) throw std::invalid_argument("logical state width mismatch");
  if (SteaneCode(t_level).N() != key.N) throw std::invalid_argument("key N does not match t level");
  return EncodedWitness{key, t_level, logical};
}

StabilizerState encode_physical(const StabilizerState& logical, const EncodingKey& key, int t_level) {
  key.validate();
  if (logical.n() != key.n) throw std::invalid_argument("logical state width mismatch");
  SteaneCode code(t_level);
  if (code.N() != key.N) throw std::invalid_argument("key N does not match t level");
  const long N = key.N;
  const int n = key.n;
  const long total = 2L * n * N;
  if (total > 4096) throw std::invalid_argument("physical encoding exceeds tableau budget");

  std::vector<int> leaders(n);
  for (int i = 0; i < n; ++i) leaders[i] = static_cast<int>(i * 2 * N);
  StabilizerState big = StabilizerState::embed(logical, static_cast<int>(total), leaders);

  CliffordCircuit enc = code.encoder_circuit();
  for (int i = 0; i < n; ++i) {
    std::vector<int> map(N);
    for (long w = 0; w < N; ++w) map[w] = static_cast<int>(i * 2 * N + w);
    big.apply_circuit(enc.remapped(static_cast<int>(total), map));
  }

  for (int i = 0; i < n; ++i) {
    for (long j = 0; j < N; ++j) {
      int q = static_cast<int>(i * 2 * N + N + j);
      switch (key.traps[static_cast<size_t>(i) * N + j]) {
        case Trap::Zero: break;
        case Trap::Plus: big.apply_h(q); break;
        case Trap::MinusI:
          big.apply_h(q);
          big.apply_p(q);
          big.apply_p(q);
          big.apply_p(q);
          break;
      }
    }
  }

  std::vector<int> mapping(total);
  for (int i = 0; i < n; ++i)
    for (long w = 0; w < 2 * N; ++w) mapping[i * 2 * N + w] = static_cast<int>(i * 2 * N + key.perm[w]);
  big.permute_qubits(mapping);

  // X^a Z^b: Z first, then X.
  for (long q = 0; q < total; ++q)
    if (key.pad_z[q]) big.apply_z(static_cast<int>(q));
  for (long q = 0; q < total; ++q)
    if (key.pad_x[q]) big.apply_x(static_cast<int>(q));
  return big;
}

Eigen::MatrixXcd decode_code_register(const DenseState& physical, const EncodingKey& key) {
  key.validate();
  const long N = key.N;
  const int n = key.n;
  if (physical.n() != 2 * n * N) throw std::invalid_argument("physical state width mismatch");

  DenseState s = physical;
  // (X^a Z^b)^dagger = Z^b X^a: X first, then Z.
  for (long q = 0; q < 2L * n * N; ++q)
    if (key.pad_x[q]) s.apply_x(static_cast<int>(q));
  for (long q = 0; q < 2L * n * N; ++q)
    if (key.pad_z[q]) s.apply_z(static_cast<int>(q));

  std::vector<int> inv = key.perm_inverse();
  std::vector<int> mapping(2L * n * N);
  for (int i = 0; i < n; ++i)
    for (long j = 0; j < 2 * N; ++j) mapping[i * 2 * N + j] = static_cast<int>(i * 2 * N + inv[j]);
  s.permute_qubits(mapping);

  std::vector<int> keep;
  keep.reserve(static_cast<size_t>(n) * N);
  for (int i = 0; i < n; ++i)
    for (long w = 0; w < N; ++w) keep.push_back(static_cast<int>(i * 2 * N + w));
  return s.reduced_density(keep);
}

Eigen::MatrixXcd decode_code_register(const PureEnsemble& physical, const EncodingKey& key) {
  if (physical.parts.empty()) throw std::invalid_argument("empty ensemble");
  Eigen::MatrixXcd acc;
  bool first = true;
  for (const auto& [w, state] : physical.parts) {
    Eigen::MatrixXcd part = w * decode_code_register(state, key);
    if (first) {
      acc = part;
      first = false;
    } else {
      acc += part;
    }
  }
  return acc;
}

Eigen::MatrixXcd soundness_decode(const PureEnsemble& physical, const EncodingKey& key) {
  if (key.n != 1)
    throw std::invalid_argument("soundness decode supports a single logical qubit at dense scale");
  return xi_apply(decode_code_register(physical, key), key.N);
}

Eigen::MatrixXcd qotp_twirl(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("qotp twirl expects one qubit");
  Eigen::MatrixXcd x = pauli_matrix('X'), z = pauli_matrix('Z');
  Eigen::MatrixXcd xz = x * z;
  return 0.25 * (rho + x * rho * x.adjoint() + z * rho * z.adjoint() + xz * rho * xz.adjoint());
}

// --- serialization -----------------------------------------------------------

nlohmann::json EncodingKey::to_json() const {
  std::string a = bitstring_str(pad_x), b = bitstring_str(pad_z);
  std::string salt_hex;
  for (uint8_t byte : salt) {
    static const char* digits = "0123456789abcdef";
    salt_hex.push_back(digits[byte >> 4]);
    salt_hex.push_back(digits[byte & 15]);
  }
  return nlohmann::json{{"n", n},       {"N", N}, {"t", trap_string()}, {"pi", perm},
                        {"a", a},       {"b", b}, {"salt", salt_hex}};
}

EncodingKey EncodingKey::from_json(const nlohmann::json& j) {
  EncodingKey key;
  key.n = j.at("n").get<int>();
  key.N = j.at("N").get<long>();
  std::string t = j.at("t").get<std::string>();
  for (char c : t) key.traps.push_back(trap_from_char(c));
  key.perm = j.at("pi").get<std::vector<int>>();
  key.pad_x = bitstring_from(j.at("a").get<std::string>());
  key.pad_z = bitstring_from(j.at("b").get<std::string>());
  std::string salt_hex = j.value("salt", std::string());
  for (size_t i = 0; i + 1 < salt_hex.size(); i += 2)
    key.salt.push_back(static_cast<uint8_t>(std::stoi(salt_hex.substr(i, 2), nullptr, 16)));
  key.validate();
  return key;
}

}  // namespace lchzk
