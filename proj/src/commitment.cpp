#include <openssl/evp.h>

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lchzk/protocol.hpp"

namespace lchzk {

CommitmentBackend commitment_backend_from(const std::string& name) {
  if (name == "hash") return CommitmentBackend::Hash;
  if (name == "transparent") return CommitmentBackend::Transparent;
  throw std::invalid_argument("commitment backend must be hash or transparent");
}

const char* commitment_backend_name(CommitmentBackend b) {
  return b == CommitmentBackend::Hash ? "hash" : "transparent";
}

std::string Commitment::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * value.size());
  for (uint8_t b : value) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

Commitment Commitment::from_hex(const std::string& h) {
  if (h.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  Commitment c;
  c.value.reserve(h.size() / 2);
  auto nibble = [](char ch) -> uint8_t {
    if (ch >= '0' && ch <= '9') return static_cast<uint8_t>(ch - '0');
    if (ch >= 'a' && ch <= 'f') return static_cast<uint8_t>(ch - 'a' + 10);
    if (ch >= 'A' && ch <= 'F') return static_cast<uint8_t>(ch - 'A' + 10);
    throw std::invalid_argument("bad hex digit");
  };
  for (size_t i = 0; i < h.size(); i += 2)
    c.value.push_back(static_cast<uint8_t>((nibble(h[i]) << 4) | nibble(h[i + 1])));
  return c;
}

namespace {

std::vector<uint8_t> sha256(const std::vector<uint8_t>& data) {
  std::vector<uint8_t> digest(EVP_MAX_MD_SIZE);
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  digest.resize(len);
  return digest;
}

}  // namespace

Commitment commit(const std::vector<uint8_t>& message, const std::vector<uint8_t>& salt,
                  CommitmentBackend backend) {
  if (salt.size() != kSaltBytes) throw std::invalid_argument("malformed salt");
  std::vector<uint8_t> buf = salt;
  buf.insert(buf.end(), message.begin(), message.end());
  Commitment c;
  if (backend == CommitmentBackend::Hash)
    c.value = sha256(buf);
  else
    c.value = buf;
  return c;
}

bool verify_open(const Commitment& z, const std::vector<uint8_t>& message,
                 const std::vector<uint8_t>& salt, CommitmentBackend backend) {
  if (salt.size() != kSaltBytes) return false;
  return commit(message, salt, backend) == z;
}

std::vector<uint8_t> key_commit_bytes(const EncodingKey& key) {
  // Length-prefixed canonical layout: n, N, pi entries (32-bit LE), pad bits.
  std::vector<uint8_t> out;
  auto push32 = [&out](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
  };
  push32(static_cast<uint32_t>(key.n));
  push32(static_cast<uint32_t>(key.N));
  for (int v : key.perm) push32(static_cast<uint32_t>(v));
  auto push_bits = [&out](const BitString& bits) {
    uint8_t acc = 0;
    int fill = 0;
    for (uint8_t b : bits) {
      acc = static_cast<uint8_t>((acc << 1) | b);
      if (++fill == 8) {
        out.push_back(acc);
        acc = 0;
        fill = 0;
      }
    }
    if (fill) out.push_back(static_cast<uint8_t>(acc << (8 - fill)));
  };
  push_bits(key.pad_x);
  push_bits(key.pad_z);
  return out;
}

}  // namespace lchzk
