// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"

namespace dcn::crypto {

using Bytes = std::vector<std::uint8_t>;

/// Secret signing material for one principal. Only the simulator kernel
/// constructs these (through KeyRegistry) and hands each node its own; the
/// adversary receives the keys of corrupted nodes and nothing else.
class SigningKey {
 public:
  enum class Kind : std::uint32_t { kNode = 1, kUser = 2 };

  Kind kind() const { return kind_; }
  std::uint32_t id() const { return id_; }

 private:
  friend class KeyRegistry;
  friend Bytes mac(const SigningKey&, std::span<const std::uint8_t>);
  SigningKey(Kind kind, std::uint32_t id, Digest secret)
      : kind_(kind), id_(id), secret_(secret) {}

  Kind kind_;
  std::uint32_t id_;
  Digest secret_;
};

struct PartialSignature {
  NodeId signer = kNoNode;
  Bytes message;
  Bytes proof;

  friend bool operator==(const PartialSignature&,
                         const PartialSignature&) = default;
};

struct ThresholdSignature {
  Bytes message;
  Bytes aggregate;
  std::size_t contributor_count = 0;

  friend bool operator==(const ThresholdSignature&,
                         const ThresholdSignature&) = default;
};

struct UserSignature {
  std::uint32_t user = 0;
  Bytes proof;

  friend bool operator==(const UserSignature&, const UserSignature&) = default;
};

/// Derives every principal's secret from one seed and verifies signatures.
/// Immutable after construction.
class KeyRegistry {
 public:
  KeyRegistry(GroupParams params, std::uint64_t seed);

  const GroupParams& params() const { return params_; }

  SigningKey node_key(NodeId node) const;
  SigningKey user_key(std::uint32_t user) const;

  bool verify_node_mac(NodeId node, std::span<const std::uint8_t> message,
                       std::span<const std::uint8_t> proof) const;
  bool verify_user(std::span<const std::uint8_t> message,
                   const UserSignature& sig) const;

 private:
  Digest derive(SigningKey::Kind kind, std::uint32_t id) const;

  GroupParams params_;
  std::uint64_t seed_;
};

UserSignature user_sign(const SigningKey& key,
                        std::span<const std::uint8_t> message);

/// (f+1, n) threshold signatures. Alternative schemes implement the same
/// interface.
class ThresholdScheme {
 public:
  virtual ~ThresholdScheme() = default;

  virtual const GroupParams& params() const = 0;
  virtual PartialSignature sign_partial(
      const SigningKey& key, std::span<const std::uint8_t> message) const = 0;
  virtual bool verify_partial(const PartialSignature& partial) const = 0;
  // Throws ParameterError if partials disagree on the message and
  // ThresholdError if fewer than f+1 distinct signers verify.
  virtual ThresholdSignature combine(
      const std::vector<PartialSignature>& partials) const = 0;
  virtual bool verify(const ThresholdSignature& sig,
                      std::span<const std::uint8_t> message) const = 0;
};

/// Idealized scheme: a partial is a MAC under the signer's registry key and
/// the aggregate is the sorted list of (signer, MAC) pairs. Unforgeable as
/// long as honest keys stay inside the kernel.
class IdealThresholdScheme final : public ThresholdScheme {
 public:
  explicit IdealThresholdScheme(std::shared_ptr<const KeyRegistry> registry);

  const GroupParams& params() const override { return registry_->params(); }
  PartialSignature sign_partial(
      const SigningKey& key,
      std::span<const std::uint8_t> message) const override;
  bool verify_partial(const PartialSignature& partial) const override;
  ThresholdSignature combine(
      const std::vector<PartialSignature>& partials) const override;
  bool verify(const ThresholdSignature& sig,
              std::span<const std::uint8_t> message) const override;

 private:
  std::shared_ptr<const KeyRegistry> registry_;
};

}  // namespace dcn::crypto
