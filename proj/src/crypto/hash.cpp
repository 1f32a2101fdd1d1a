// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/crypto/hash.hpp"

#include <openssl/sha.h>

namespace dcn::crypto {

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::string InstanceHash::hex() const { return to_hex(digest); }

std::uint64_t InstanceHash::prefix64() const {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | digest[i];
  return v;
}

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

InstanceHash hash_instance(std::span<const std::uint8_t> tx,
                           std::span<const std::uint8_t> nonce) {
  Encoder enc("dcn/instance/v1");
  enc.bytes(tx).bytes(nonce);
  return InstanceHash{sha256(enc.data())};
}

Encoder& Encoder::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

Encoder& Encoder::bytes(std::span<const std::uint8_t> b) {
  u64(b.size());
  return raw(b);
}

Encoder& Encoder::raw(std::span<const std::uint8_t> b) {
  out_.insert(out_.end(), b.begin(), b.end());
  return *this;
}

Encoder& Encoder::raw(std::string_view s) {
  out_.insert(out_.end(), s.begin(), s.end());
  return *this;
}

}  // namespace dcn::crypto
