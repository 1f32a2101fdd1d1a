// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/submission/envelope.hpp"

#include "dcn/crypto/shamir.hpp"

namespace dcn::submission {
namespace {

Bytes fresh_nonce(Rng& rng, std::size_t nonce_bytes) {
  Bytes nonce(nonce_bytes);
  for (auto& b : nonce) b = rng.byte();
  return nonce;
}

void sign_shares(TxEnvelope& env, const std::vector<Bytes>& payloads,
                 const crypto::SigningKey& user_key, std::size_t first) {
  for (std::size_t i = first; i < payloads.size(); ++i) {
    const auto index = static_cast<std::uint32_t>(i + 1);
    env.shares[i] = crypto::SecretShare{
        index, payloads[i],
        crypto::user_sign(user_key,
                          crypto::share_message(env.h, index, payloads[i]))};
  }
}

}  // namespace

TxEnvelope user_create_envelope(const Bytes& tx, const GroupParams& group,
                                const crypto::SigningKey& user_key, Rng& rng,
                                std::size_t nonce_bytes) {
  TxEnvelope env;
  env.tx = tx;
  env.nonce = fresh_nonce(rng, nonce_bytes);
  env.h = crypto::hash_instance(env.tx, env.nonce);
  Bytes secret = tx;
  secret.insert(secret.end(), env.nonce.begin(), env.nonce.end());
  env.shares.resize(group.n);
  sign_shares(env, crypto::shamir_split(secret, group.n, group.threshold(), rng),
              user_key, 0);
  return env;
}

TxEnvelope user_create_contradictory_envelope(
    const Bytes& tx, const GroupParams& group,
    const crypto::SigningKey& user_key, Rng& rng, NodeId split_at,
    std::size_t nonce_bytes) {
  TxEnvelope env = user_create_envelope(tx, group, user_key, rng, nonce_bytes);
  Bytes secret = tx;
  secret.insert(secret.end(), env.nonce.begin(), env.nonce.end());
  const auto other =
      crypto::shamir_split(secret, group.n, group.threshold(), rng);
  if (split_at >= 1 && split_at <= group.n) {
    sign_shares(env, other, user_key, split_at - 1);
  }
  return env;
}

Bytes stamp_message(const InstanceHash& h, Tick tau) {
  crypto::Encoder enc("dcn/stamp/v1");
  enc.raw(h.digest).i64(tau);
  return enc.take();
}

bool split_secret(const Bytes& secret, std::size_t nonce_bytes, Bytes& tx,
                  Bytes& nonce) {
  if (secret.size() < nonce_bytes) return false;
  const auto cut = secret.end() - static_cast<std::ptrdiff_t>(nonce_bytes);
  tx.assign(secret.begin(), cut);
  nonce.assign(cut, secret.end());
  return true;
}

}  // namespace dcn::submission
