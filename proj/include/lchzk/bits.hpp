#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lchzk {

// Classical bit strings (one byte per bit).  Index 0 is the leftmost
// character of the printed string and corresponds to qubit 0.
using BitString = std::vector<uint8_t>;

inline BitString bitstring_from(const std::string& s) {
  BitString out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must be over {0,1}");
    out.push_back(static_cast<uint8_t>(c - '0'));
  }
  return out;
}

inline std::string bitstring_str(const BitString& b) {
  std::string s(b.size(), '0');
  for (size_t i = 0; i < b.size(); ++i) s[i] = b[i] ? '1' : '0';
  return s;
}

inline BitString bitstring_xor(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bit string length mismatch");
  BitString out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

inline size_t hamming_weight(const BitString& b) {
  size_t w = 0;
  for (uint8_t v : b) w += v;
  return w;
}

inline int parity(const BitString& b) { return static_cast<int>(hamming_weight(b) & 1); }

inline bool is_zero(const BitString& b) {
  for (uint8_t v : b)
    if (v) return false;
  return true;
}

inline BitString subrange(const BitString& b, size_t begin, size_t len) {
  if (begin + len > b.size()) throw std::out_of_range("bit string subrange");
  return BitString(b.begin() + begin, b.begin() + begin + len);
}

inline BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Value of the string read as a binary number, leftmost bit most significant.
inline uint64_t bitstring_value(const BitString& b) {
  uint64_t v = 0;
  for (uint8_t bit : b) v = (v << 1) | bit;
  return v;
}

inline BitString bitstring_of_value(uint64_t v, size_t len) {
  BitString out(len, 0);
  for (size_t i = 0; i < len; ++i) out[len - 1 - i] = static_cast<uint8_t>((v >> i) & 1);
  return out;
}

}  // namespace lchzk
