// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <variant>

#include "dcn/core/dyadic.hpp"
#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/crypto/secret_share.hpp"
#include "dcn/crypto/signatures.hpp"

namespace dcn::protocol {

using crypto::InstanceHash;

// User -> node v: the user's signed share for v. The instance is h.
struct UserSubmit {
  crypto::SecretShare share;
};

// Receipt timestamp broadcast.
struct InitTs {
  Tick timestamp = 0;
};

// Reliable-broadcast traffic of the approximate-agreement rounds.
struct AaRbc {
  enum class Phase : std::uint8_t { kSend, kEcho, kReady };
  Phase phase = Phase::kSend;
  std::uint32_t round = 0;
  NodeId origin = kNoNode;
  Dyadic value;
};

// "I have delivered round-`round` values from these origins."
struct AaWitness {
  std::uint32_t round = 0;
  NodeSet senders;
};

struct AbaBval {
  std::uint32_t phase = 0;
  std::uint8_t bit = 0;
};

struct AbaAux {
  std::uint32_t phase = 0;
  std::uint8_t bit = 0;
};

// Sent once on deciding: stands for BVAL(bit) and AUX(bit) in every phase
// from `from_phase` on, which is what the sender would keep sending.
struct AbaTerm {
  std::uint32_t from_phase = 0;
  std::uint8_t bit = 0;
};

// Partial threshold signature on the stamp (h, tau).
struct SigPartial {
  Tick tau = 0;
  crypto::PartialSignature partial;
};

struct ShareReveal {
  crypto::SecretShare share;
};

using Body = std::variant<UserSubmit, InitTs, AaRbc, AaWitness, AbaBval,
                          AbaAux, AbaTerm, SigPartial, ShareReveal>;

struct ProtocolMessage {
  InstanceHash instance;
  Body body;
};

using MessagePtr = std::shared_ptr<const ProtocolMessage>;

std::string_view kind_name(const Body& body);

// Stable 64-bit digest of the full message contents, used by the event log.
std::uint64_t message_digest(const ProtocolMessage& msg);

// Scalar summary for logs: timestamp, value floor, bit, or tau.
std::int64_t message_value(const Body& body);

}  // namespace dcn::protocol
