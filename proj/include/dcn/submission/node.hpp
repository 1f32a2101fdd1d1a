// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/crypto/secret_share.hpp"
#include "dcn/crypto/signatures.hpp"
#include "dcn/protocol/messages.hpp"
#include "dcn/protocol/pi_ta.hpp"
#include "dcn/submission/envelope.hpp"
#include "dcn/submission/ledger.hpp"

namespace dcn::submission {

struct NodeConfig {
  protocol::TaParams ta;
  std::size_t nonce_bytes = kDefaultNonceBytes;
};

/// Observable milestones a node reports to its host.
struct NodeEvent {
  enum class Kind {
    kReceipt,          // a = receipt timestamp (local tick)
    kBadUserMessage,   // user share failed verification
    kInitOutput,       // a = tau_mu
    kAaOutput,         // a = floor(tau_aa), b = AA rounds
    kAbaDecide,        // a = decided bit, b = phase
    kTaOutput,         // a = tau, b = rounds used
    kPartialRejected,  // a = tau claimed by the partial
    kSigReady,         // a = tau
    kShareAccepted,    // a = share index
    kReconstruct,      // a = tau
    kAbort,            // reconstruction failed the hash check
  };
  Kind kind;
  InstanceHash h;
  std::int64_t a = 0;
  std::int64_t b = 0;
  NodeId peer = kNoNode;
};

/// Everything a node asks its host to do after one input.
struct Effects {
  std::vector<protocol::ProtocolMessage> broadcasts;
  std::vector<std::pair<InstanceHash, Tick>> timers;  // local deadlines
  std::vector<NodeEvent> events;
  std::vector<MempoolEntry> submissions;
};

/// One committee member running the submission pipeline: agree on a
/// timestamp for h, threshold-sign (h, tau), and only then reveal the share
/// and rebuild the transaction.
class ClockNode {
 public:
  ClockNode(NodeId id, NodeConfig config,
            std::shared_ptr<const crypto::KeyRegistry> registry,
            std::shared_ptr<const crypto::ThresholdScheme> scheme,
            crypto::SigningKey key,
            std::shared_ptr<const protocol::CommonCoin> coin);

  NodeId id() const { return id_; }

  /// `sender` is kNoNode for messages from the user.
  void on_message(NodeId sender, const protocol::ProtocolMessage& msg,
                  Tick local_now, Effects& fx);
  void on_timer(const InstanceHash& h, Tick local_now, Effects& fx);

  struct InstanceView {
    std::optional<Tick> receipt;
    std::optional<Tick> tau;
    bool sig_ready = false;
    bool submitted = false;
    bool aborted = false;
    std::uint32_t rounds_used = 0;
  };
  std::optional<InstanceView> view(const InstanceHash& h) const;
  const protocol::PiTa* agreement(const InstanceHash& h) const;

 private:
  struct Instance {
    std::unique_ptr<protocol::PiTa> ta;
    std::optional<crypto::SecretShare> own_share;
    std::optional<Tick> receipt;
    std::optional<Tick> tau;
    // tau -> signer -> partial; first valid partial per signer and tau.
    std::map<Tick, std::map<NodeId, crypto::PartialSignature>> partials;
    std::optional<crypto::ThresholdSignature> sigma;
    std::map<std::uint32_t, crypto::SecretShare> shares;
    bool submitted = false;
    bool aborted = false;
  };

  Instance& instance(const InstanceHash& h);
  void after_agreement_step(const InstanceHash& h, Instance& inst,
                            std::vector<protocol::Body> out, Effects& fx);
  void try_combine(const InstanceHash& h, Instance& inst, Effects& fx);
  void try_reconstruct(const InstanceHash& h, Instance& inst, Effects& fx);

  NodeId id_;
  NodeConfig config_;
  std::shared_ptr<const crypto::KeyRegistry> registry_;
  std::shared_ptr<const crypto::ThresholdScheme> scheme_;
  crypto::SigningKey key_;
  std::shared_ptr<const protocol::CommonCoin> coin_;
  std::map<InstanceHash, Instance> instances_;
};

}  // namespace dcn::submission
