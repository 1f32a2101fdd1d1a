// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "dcn/crypto/hash.hpp"
#include "dcn/crypto/signatures.hpp"

namespace dcn::crypto {

/// One node's share of a user's (tx, nonce), signed by the user so that
/// relaying nodes cannot alter it.
struct SecretShare {
  std::uint32_t node_index = 0;
  Bytes payload;
  UserSignature user_sig;

  friend bool operator==(const SecretShare&, const SecretShare&) = default;
};

/// Bytes the user signs for a share: binds instance, index and payload.
Bytes share_message(const InstanceHash& h, std::uint32_t node_index,
                    std::span<const std::uint8_t> payload);

bool verify_share(const KeyRegistry& registry, const InstanceHash& h,
                  const SecretShare& share);

}  // namespace dcn::crypto
