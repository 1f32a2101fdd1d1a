// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dcn::crypto {

using Digest = std::array<std::uint8_t, 32>;

/// Identifies one agreement instance; derived from (tx, nonce).
struct InstanceHash {
  Digest digest{};

  std::string hex() const;
  // First 8 bytes, big-endian; handy as a compact log key.
  std::uint64_t prefix64() const;

  friend auto operator<=>(const InstanceHash&, const InstanceHash&) = default;
};

Digest sha256(std::span<const std::uint8_t> data);

/// SHA-256 over a domain tag followed by length-prefixed tx and nonce, so
/// moving bytes across the tx/nonce boundary changes the digest.
InstanceHash hash_instance(std::span<const std::uint8_t> tx,
                           std::span<const std::uint8_t> nonce);

/// Little-endian, length-prefixed byte encoder for signed messages.
class Encoder {
 public:
  explicit Encoder(std::string_view domain) { raw(domain); }

  Encoder& u32(std::uint32_t v);
  Encoder& u64(std::uint64_t v);
  Encoder& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  // Length-prefixed.
  Encoder& bytes(std::span<const std::uint8_t> b);
  Encoder& raw(std::span<const std::uint8_t> b);
  Encoder& raw(std::string_view s);

  const std::vector<std::uint8_t>& data() const { return out_; }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace dcn::crypto
