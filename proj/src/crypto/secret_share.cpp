// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/crypto/secret_share.hpp"

namespace dcn::crypto {

Bytes share_message(const InstanceHash& h, std::uint32_t node_index,
                    std::span<const std::uint8_t> payload) {
  Encoder enc("dcn/share/v1");
  enc.raw(h.digest).u32(node_index).bytes(payload);
  return enc.take();
}

bool verify_share(const KeyRegistry& registry, const InstanceHash& h,
                  const SecretShare& share) {
  return registry.verify_user(share_message(h, share.node_index, share.payload),
                              share.user_sig);
}

}  // namespace dcn::crypto
