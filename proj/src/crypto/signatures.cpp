// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/crypto/signatures.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <string>

namespace dcn::crypto {
namespace {

constexpr std::size_t kMacSize = 32;

Bytes hmac_sha256(const Digest& key, std::span<const std::uint8_t> message) {
  Bytes out(kMacSize);
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(),
       message.size(), out.data(), &len);
  out.resize(len);
  return out;
}

bool equal_ct(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

Bytes tagged(std::string_view domain, std::span<const std::uint8_t> message) {
  Encoder enc(domain);
  enc.raw(message);
  return enc.take();
}

constexpr std::string_view kPartialDomain = "dcn/partial/v1";
constexpr std::string_view kUserDomain = "dcn/user/v1";

}  // namespace

Bytes mac(const SigningKey& key, std::span<const std::uint8_t> message) {
  return hmac_sha256(key.secret_, message);
}

KeyRegistry::KeyRegistry(GroupParams params, std::uint64_t seed)
    : params_(params), seed_(seed) {
  if (!params_.valid()) {
    throw ParameterError("KeyRegistry: invalid group parameters");
  }
}

Digest KeyRegistry::derive(SigningKey::Kind kind, std::uint32_t id) const {
  Encoder enc("dcn/key/v1");
  enc.u64(seed_).u32(static_cast<std::uint32_t>(kind)).u32(id);
  return sha256(enc.data());
}

SigningKey KeyRegistry::node_key(NodeId node) const {
  if (node < 1 || node > params_.n) {
    throw ParameterError("KeyRegistry: node id out of range");
  }
  return SigningKey(SigningKey::Kind::kNode, node,
                    derive(SigningKey::Kind::kNode, node));
}

SigningKey KeyRegistry::user_key(std::uint32_t user) const {
  return SigningKey(SigningKey::Kind::kUser, user,
                    derive(SigningKey::Kind::kUser, user));
}

bool KeyRegistry::verify_node_mac(NodeId node,
                                  std::span<const std::uint8_t> message,
                                  std::span<const std::uint8_t> proof) const {
  if (node < 1 || node > params_.n) return false;
  return equal_ct(hmac_sha256(derive(SigningKey::Kind::kNode, node), message),
                  proof);
}

bool KeyRegistry::verify_user(std::span<const std::uint8_t> message,
                              const UserSignature& sig) const {
  const Bytes expected = hmac_sha256(derive(SigningKey::Kind::kUser, sig.user),
                                     tagged(kUserDomain, message));
  return equal_ct(expected, sig.proof);
}

UserSignature user_sign(const SigningKey& key,
                        std::span<const std::uint8_t> message) {
  if (key.kind() != SigningKey::Kind::kUser) {
    throw ParameterError("user_sign: not a user key");
  }
  return UserSignature{key.id(), mac(key, tagged(kUserDomain, message))};
}

IdealThresholdScheme::IdealThresholdScheme(
    std::shared_ptr<const KeyRegistry> registry)
    : registry_(std::move(registry)) {}

PartialSignature IdealThresholdScheme::sign_partial(
    const SigningKey& key, std::span<const std::uint8_t> message) const {
  if (key.kind() != SigningKey::Kind::kNode) {
    throw ParameterError("sign_partial: not a node key");
  }
  return PartialSignature{key.id(), Bytes(message.begin(), message.end()),
                          mac(key, tagged(kPartialDomain, message))};
}

bool IdealThresholdScheme::verify_partial(
    const PartialSignature& partial) const {
  return registry_->verify_node_mac(partial.signer,
                                    tagged(kPartialDomain, partial.message),
                                    partial.proof);
}

ThresholdSignature IdealThresholdScheme::combine(
    const std::vector<PartialSignature>& partials) const {
  if (partials.empty()) {
    throw ThresholdError("combine: no partial signatures");
  }
  const Bytes& message = partials.front().message;
  for (const auto& p : partials) {
    if (p.message != message) {
      throw ParameterError("combine: partials sign different messages");
    }
  }
  const std::size_t need = params().threshold();
  NodeSet used;
  std::vector<const PartialSignature*> chosen;
  for (const auto& p : partials) {
    if (chosen.size() == need) break;
    if (!verify_partial(p) || used.contains(p.signer)) continue;
    used.insert(p.signer);
    chosen.push_back(&p);
  }
  if (chosen.size() < need) {
    throw ThresholdError("combine: " + std::to_string(chosen.size()) +
                         " valid distinct partials, need " +
                         std::to_string(need));
  }
  std::sort(chosen.begin(), chosen.end(),
            [](auto* a, auto* b) { return a->signer < b->signer; });
  Encoder agg("");
  for (const auto* p : chosen) agg.u32(p->signer).raw(p->proof);
  return ThresholdSignature{message, agg.take(), chosen.size()};
}

bool IdealThresholdScheme::verify(const ThresholdSignature& sig,
                                  std::span<const std::uint8_t> message) const {
  if (!std::equal(sig.message.begin(), sig.message.end(), message.begin(),
                  message.end())) {
    return false;
  }
  constexpr std::size_t kEntry = 4 + kMacSize;
  if (sig.aggregate.empty() || sig.aggregate.size() % kEntry != 0) return false;
  const std::size_t count = sig.aggregate.size() / kEntry;
  if (count != sig.contributor_count || count < params().threshold()) {
    return false;
  }
  const Bytes body = tagged(kPartialDomain, message);
  NodeSet seen;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* e = sig.aggregate.data() + i * kEntry;
    const NodeId signer = static_cast<NodeId>(e[0]) |
                          static_cast<NodeId>(e[1]) << 8 |
                          static_cast<NodeId>(e[2]) << 16 |
                          static_cast<NodeId>(e[3]) << 24;
    if (signer < 1 || signer > params().n || seen.contains(signer)) {
      return false;
    }
    seen.insert(signer);
    if (!registry_->verify_node_mac(signer, body, {e + 4, kMacSize})) {
      return false;
    }
  }
  return true;
}

}  // namespace dcn::crypto
