// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/protocol/messages.hpp"

namespace dcn::protocol {

/// Shared random bit per (instance, phase).
class CommonCoin {
 public:
  virtual ~CommonCoin() = default;
  virtual std::uint8_t flip(const crypto::InstanceHash& instance,
                            std::uint32_t phase) const = 0;
};

/// Seeded oracle: SHA-256 of (seed, instance, phase), low bit.
class IdealCoin final : public CommonCoin {
 public:
  explicit IdealCoin(std::uint64_t seed) : seed_(seed) {}
  std::uint8_t flip(const crypto::InstanceHash& instance,
                    std::uint32_t phase) const override;

 private:
  std::uint64_t seed_;
};

struct AbaParams {
  GroupParams group;
  // Phases beyond this are ignored (a node that reaches it stalls).
  std::uint32_t max_phases = 256;
};

/// Randomized binary agreement in the BV-broadcast / AUX / common-coin
/// style. A node that decides broadcasts one ABA_TERM in place of the
/// identical BVAL and AUX messages it would send in all later phases, then
/// stops advancing. It still relays BVALs of phases it has reached.
class PiAba {
 public:
  using Out = std::vector<Body>;

  PiAba(AbaParams params, crypto::InstanceHash instance,
        std::shared_ptr<const CommonCoin> coin);

  Out on_input(std::uint8_t bit);
  Out on_message(NodeId sender, const AbaBval& msg);
  Out on_message(NodeId sender, const AbaAux& msg);
  Out on_message(NodeId sender, const AbaTerm& msg);

  bool joined() const { return phase_ > 0; }
  std::optional<std::uint8_t> decided() const { return decided_; }
  // Phase in which the decision happened (1-based), or 0.
  std::uint32_t decision_phase() const { return decision_phase_; }
  std::uint32_t phase() const { return phase_; }
  std::uint64_t discarded() const { return discarded_; }

 private:
  struct Phase {
    std::array<NodeSet, 2> bval_from;
    std::array<bool, 2> bval_sent{false, false};
    std::array<bool, 2> bin{false, false};
    NodeSet aux_senders;
    std::array<NodeSet, 2> aux_from;
    bool aux_sent = false;
  };

  Phase& phase_state(std::uint32_t r);
  // Count including TERM senders that stand in for phase r.
  std::size_t bval_count(std::uint32_t r, std::uint8_t b);
  std::size_t aux_count(std::uint32_t r, std::uint8_t b);
  void act(std::uint32_t r, Out& out);
  void try_advance(Out& out);
  void send_bval(std::uint32_t r, std::uint8_t b, Out& out);

  AbaParams params_;
  crypto::InstanceHash instance_;
  std::shared_ptr<const CommonCoin> coin_;
  std::uint32_t phase_ = 0;
  std::uint8_t estimate_ = 0;
  std::optional<std::uint8_t> decided_;
  std::uint32_t decision_phase_ = 0;
  std::map<std::uint32_t, Phase> phases_;
  // sender -> (from_phase, bit); first TERM per sender wins.
  std::map<NodeId, std::pair<std::uint32_t, std::uint8_t>> terms_;
  std::uint64_t discarded_ = 0;
};

}  // namespace dcn::protocol
