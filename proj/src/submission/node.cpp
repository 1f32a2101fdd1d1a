// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/submission/node.hpp"

#include <type_traits>

#include "dcn/crypto/shamir.hpp"

namespace dcn::submission {

using protocol::Body;
using protocol::ProtocolMessage;

ClockNode::ClockNode(NodeId id, NodeConfig config,
                     std::shared_ptr<const crypto::KeyRegistry> registry,
                     std::shared_ptr<const crypto::ThresholdScheme> scheme,
                     crypto::SigningKey key,
                     std::shared_ptr<const protocol::CommonCoin> coin)
    : id_(id),
      config_(config),
      registry_(std::move(registry)),
      scheme_(std::move(scheme)),
      key_(key),
      coin_(std::move(coin)) {}

ClockNode::Instance& ClockNode::instance(const InstanceHash& h) {
  auto it = instances_.find(h);
  if (it == instances_.end()) {
    Instance inst;
    inst.ta = std::make_unique<protocol::PiTa>(config_.ta, id_, h, coin_);
    it = instances_.emplace(h, std::move(inst)).first;
  }
  return it->second;
}

void ClockNode::on_message(NodeId sender, const ProtocolMessage& msg,
                           Tick local_now, Effects& fx) {
  const InstanceHash& h = msg.instance;
  Instance& inst = instance(h);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, protocol::UserSubmit>) {
          if (sender != kNoNode || m.share.node_index != id_ ||
              !crypto::verify_share(*registry_, h, m.share)) {
            fx.events.push_back({NodeEvent::Kind::kBadUserMessage, h});
            return;
          }
          if (inst.receipt) return;  // one instance per h
          inst.receipt = local_now;
          inst.own_share = m.share;
          fx.events.push_back({NodeEvent::Kind::kReceipt, h, local_now});
          auto out = inst.ta->on_input(local_now, local_now);
          if (auto deadline = inst.ta->init_deadline()) {
            fx.timers.emplace_back(h, *deadline);
          }
          after_agreement_step(h, inst, std::move(out), fx);
        } else if constexpr (std::is_same_v<T, protocol::SigPartial>) {
          const auto& p = m.partial;
          if (p.signer != sender || p.message != stamp_message(h, m.tau) ||
              !scheme_->verify_partial(p) || (inst.tau && *inst.tau != m.tau)) {
            fx.events.push_back(
                {NodeEvent::Kind::kPartialRejected, h, m.tau, 0, sender});
            return;
          }
          inst.partials[m.tau].try_emplace(p.signer, p);
          try_combine(h, inst, fx);
        } else if constexpr (std::is_same_v<T, protocol::ShareReveal>) {
          const auto& s = m.share;
          if (s.node_index < 1 || s.node_index > config_.ta.group.n ||
              !crypto::verify_share(*registry_, h, s)) {
            return;
          }
          if (inst.shares.try_emplace(s.node_index, s).second) {
            fx.events.push_back(
                {NodeEvent::Kind::kShareAccepted, h, s.node_index, 0, sender});
          }
          try_reconstruct(h, inst, fx);
        } else {
          if (sender == kNoNode) return;
          after_agreement_step(h, inst, inst.ta->on_message(sender, m, local_now),
                               fx);
        }
      },
      msg.body);
}

void ClockNode::on_timer(const InstanceHash& h, Tick local_now, Effects& fx) {
  auto it = instances_.find(h);
  if (it == instances_.end()) return;
  after_agreement_step(h, it->second, it->second.ta->on_timer(local_now), fx);
}

void ClockNode::after_agreement_step(const InstanceHash& h, Instance& inst,
                                     std::vector<Body> out, Effects& fx) {
  for (auto& body : out) fx.broadcasts.push_back({h, std::move(body)});
  for (const auto& ev : inst.ta->drain_events()) {
    using K = protocol::StageEvent::Kind;
    switch (ev.kind) {
      case K::kInitOutput:
        fx.events.push_back({NodeEvent::Kind::kInitOutput, h, ev.value});
        break;
      case K::kAaOutput:
        fx.events.push_back({NodeEvent::Kind::kAaOutput, h, ev.value, ev.detail});
        break;
      case K::kAbaDecide:
        fx.events.push_back({NodeEvent::Kind::kAbaDecide, h, ev.value, ev.detail});
        break;
      case K::kTaOutput:
        fx.events.push_back({NodeEvent::Kind::kTaOutput, h, ev.value, ev.detail});
        break;
    }
  }
  if (inst.tau || !inst.ta->output()) return;
  // Agreement reached: sign (h, tau) and broadcast the partial.
  inst.tau = *inst.ta->output();
  auto partial = scheme_->sign_partial(key_, stamp_message(h, *inst.tau));
  fx.broadcasts.push_back({h, protocol::SigPartial{*inst.tau, partial}});
  // Drop buffered partials on other timestamps.
  for (auto it = inst.partials.begin(); it != inst.partials.end();) {
    if (it->first != *inst.tau) {
      for (const auto& [signer, p] : it->second) {
        fx.events.push_back(
            {NodeEvent::Kind::kPartialRejected, h, it->first, 0, signer});
      }
      it = inst.partials.erase(it);
    } else {
      ++it;
    }
  }
  try_combine(h, inst, fx);
}

void ClockNode::try_combine(const InstanceHash& h, Instance& inst,
                            Effects& fx) {
  if (inst.sigma || !inst.tau) return;
  auto bucket = inst.partials.find(*inst.tau);
  if (bucket == inst.partials.end() ||
      bucket->second.size() < config_.ta.group.threshold()) {
    return;
  }
  std::vector<crypto::PartialSignature> partials;
  for (const auto& [signer, p] : bucket->second) partials.push_back(p);
  inst.sigma = scheme_->combine(partials);
  fx.events.push_back({NodeEvent::Kind::kSigReady, h, *inst.tau});
  // The share goes out only now that the timestamp is fixed.
  if (inst.own_share) {
    fx.broadcasts.push_back({h, protocol::ShareReveal{*inst.own_share}});
  }
  try_reconstruct(h, inst, fx);
}

void ClockNode::try_reconstruct(const InstanceHash& h, Instance& inst,
                                Effects& fx) {
  if (!inst.sigma || inst.submitted || inst.aborted ||
      inst.shares.size() < config_.ta.group.threshold()) {
    return;
  }
  std::vector<crypto::IndexedShare> indexed;
  for (const auto& [index, s] : inst.shares) indexed.push_back({index, s.payload});
  const Bytes secret =
      crypto::shamir_reconstruct(indexed, config_.ta.group.threshold());
  Bytes tx, nonce;
  if (!split_secret(secret, config_.nonce_bytes, tx, nonce) ||
      crypto::hash_instance(tx, nonce) != h) {
    inst.aborted = true;
    fx.events.push_back({NodeEvent::Kind::kAbort, h, *inst.tau});
    return;
  }
  inst.submitted = true;
  fx.events.push_back({NodeEvent::Kind::kReconstruct, h, *inst.tau});
  fx.submissions.push_back(
      MempoolEntry{std::move(tx), std::move(nonce), h, *inst.tau, *inst.sigma, id_});
}

std::optional<ClockNode::InstanceView> ClockNode::view(
    const InstanceHash& h) const {
  auto it = instances_.find(h);
  if (it == instances_.end()) return std::nullopt;
  const Instance& inst = it->second;
  return InstanceView{inst.receipt,        inst.tau,
                      inst.sigma.has_value(), inst.submitted,
                      inst.aborted,        inst.ta->rounds_used()};
}

const protocol::PiTa* ClockNode::agreement(const InstanceHash& h) const {
  auto it = instances_.find(h);
  return it == instances_.end() ? nullptr : it->second.ta.get();
}

}  // namespace dcn::submission
