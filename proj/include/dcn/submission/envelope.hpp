// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dcn/core/rng.hpp"
#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/crypto/secret_share.hpp"
#include "dcn/crypto/signatures.hpp"

namespace dcn::submission {

using crypto::Bytes;
using crypto::InstanceHash;

inline constexpr std::size_t kDefaultNonceBytes = 32;

/// What a user prepares before contacting the committee: a fresh nonce, the
/// instance hash, and one signed share of (tx || nonce) per node.
struct TxEnvelope {
  Bytes tx;
  Bytes nonce;
  InstanceHash h;
  std::vector<crypto::SecretShare> shares;  // shares[v - 1] is node v's
};

/// Splits (tx || nonce) with threshold f + 1 and signs every share.
TxEnvelope user_create_envelope(const Bytes& tx, const GroupParams& group,
                                const crypto::SigningKey& user_key, Rng& rng,
                                std::size_t nonce_bytes = kDefaultNonceBytes);

/// Envelope whose shares come from two unrelated sharings of the same
/// secret: nodes below `split_at` get one, the rest the other. Any
/// reconstruction that mixes them fails the hash check.
TxEnvelope user_create_contradictory_envelope(
    const Bytes& tx, const GroupParams& group,
    const crypto::SigningKey& user_key, Rng& rng, NodeId split_at,
    std::size_t nonce_bytes = kDefaultNonceBytes);

/// Encoding of (h, tau) that nodes threshold-sign.
Bytes stamp_message(const InstanceHash& h, Tick tau);

/// Splits reconstructed bytes into (tx, nonce); false if too short.
bool split_secret(const Bytes& secret, std::size_t nonce_bytes, Bytes& tx,
                  Bytes& nonce);

}  // namespace dcn::submission
