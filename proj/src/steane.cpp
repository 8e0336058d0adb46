#include "lchzk/steane.hpp"

#include <limits>
#include <stdexcept>

namespace lchzk {

namespace {

std::array<BitString, 8> parse_words(const std::array<const char*, 8>& strs) {
  std::array<BitString, 8> out;
  for (size_t i = 0; i < strs.size(); ++i) out[i] = bitstring_from(strs[i]);
  return out;
}

const std::array<const char*, 8> kWords0 = {"0000000", "0001111", "0110011", "0111100",
                                            "1010101", "1011010", "1100110", "1101001"};
const std::array<const char*, 8> kWords1 = {"0010110", "0011001", "0100101", "0101010",
                                            "1000011", "1001100", "1110000", "1111111"};

}  // namespace

SteaneCode::SteaneCode(int t_level) : t_(t_level) {
  if (t_level < 1) throw std::invalid_argument("concatenation level must be >= 1");
  N_ = 1;
  K_ = 1;
  for (int i = 0; i < t_level; ++i) {
    if (N_ > std::numeric_limits<long>::max() / 7) throw std::invalid_argument("concatenation level too large");
    N_ *= 7;
    K_ *= 3;
  }
}

const std::array<BitString, 8>& SteaneCode::base_words(int logical) {
  static const std::array<BitString, 8> w0 = parse_words(kWords0);
  static const std::array<BitString, 8> w1 = parse_words(kWords1);
  return logical ? w1 : w0;
}

bool SteaneCode::is_codeword(const BitString& y) const { return logical_decode(y).has_value(); }

std::optional<int> SteaneCode::logical_decode(const BitString& y) const {
  if (static_cast<long>(y.size()) != N_) throw std::invalid_argument("codeword length mismatch");
  if (t_ == 1) {
    for (int b = 0; b < 2; ++b)
      for (const BitString& w : base_words(b))
        if (w == y) return b;
    return std::nullopt;
  }
  SteaneCode inner(t_ - 1);
  BitString outer(7);
  const long block = N_ / 7;
  for (int i = 0; i < 7; ++i) {
    auto bit = inner.logical_decode(subrange(y, static_cast<size_t>(i) * block, block));
    if (!bit) return std::nullopt;
    outer[i] = static_cast<uint8_t>(*bit);
  }
  SteaneCode base(1);
  return base.logical_decode(outer);
}

BitString SteaneCode::sample_codeword(int logical, Rng& rng) const {
  if (logical != 0 && logical != 1) throw std::invalid_argument("logical bit must be 0 or 1");
  if (t_ == 1) return base_words(logical)[rng.below(8)];
  SteaneCode inner(t_ - 1);
  const BitString& outer = base_words(logical)[rng.below(8)];
  BitString out;
  out.reserve(N_);
  for (int i = 0; i < 7; ++i) {
    BitString blockbits = inner.sample_codeword(outer[i], rng);
    out.insert(out.end(), blockbits.begin(), blockbits.end());
  }
  return out;
}

CliffordCircuit SteaneCode::base_encoder() {
  CliffordCircuit u7(7);
  u7.h(4).h(5).h(6);
  u7.cnot(0, 1).cnot(0, 2);
  u7.cnot(6, 3).cnot(6, 1).cnot(6, 0);
  u7.cnot(5, 3).cnot(5, 2).cnot(5, 0);
  u7.cnot(4, 3).cnot(4, 2).cnot(4, 1);
  return u7;
}

CliffordCircuit SteaneCode::encoder_circuit() const {
  if (t_ == 1) return base_encoder();
  const long block = N_ / 7;
  CliffordCircuit out(static_cast<int>(N_));
  // Outer encoder on the block leaders.
  std::vector<int> leaders(7);
  for (int i = 0; i < 7; ++i) leaders[i] = static_cast<int>(i * block);
  out.append(base_encoder().remapped(static_cast<int>(N_), leaders));
  // Inner encoders, one per block.
  SteaneCode inner(t_ - 1);
  CliffordCircuit inner_enc = inner.encoder_circuit();
  for (int i = 0; i < 7; ++i) {
    std::vector<int> map(block);
    for (long q = 0; q < block; ++q) map[q] = static_cast<int>(i * block + q);
    out.append(inner_enc.remapped(static_cast<int>(N_), map));
  }
  return out;
}

long SteaneCode::min_distance() const {
  if (t_ == 1) {
    long best = 7;
    for (int b = 0; b < 2; ++b)
      for (const BitString& w : base_words(b)) {
        long wt = static_cast<long>(hamming_weight(w));
        if (wt > 0 && wt < best) best = wt;
      }
    return best;  // == 3, witnessed by 0010110
  }
  return K_;
}

}  // namespace lchzk
