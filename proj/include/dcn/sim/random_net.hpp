// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal asynchronous network for exercising a single protocol stage
// without the simulator: every broadcast is queued per recipient and
// delivered in seeded random order.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dcn/core/rng.hpp"
#include "dcn/core/types.hpp"
#include "dcn/protocol/messages.hpp"

namespace dcn::sim {

class RandomOrderNet {
 public:
  using Out = std::vector<protocol::Body>;
  // Delivers `body` from `from` to honest node `to`; returns its broadcasts.
  using Handler =
      std::function<Out(NodeId to, NodeId from, const protocol::Body& body)>;
  // Rewrites a byzantine node's outgoing message per recipient; nullopt
  // drops it.
  using Tamper = std::function<std::optional<protocol::Body>(
      NodeId from, NodeId to, const protocol::Body& body)>;

  RandomOrderNet(std::size_t n, std::uint64_t seed) : n_(n), rng_(seed) {}

  void set_handler(Handler h) { handler_ = std::move(h); }
  void set_byzantine(NodeId id, Tamper t) {
    if (byzantine_.size() <= id) byzantine_.resize(id + 1);
    byzantine_[id] = std::move(t);
  }
  bool is_byzantine(NodeId id) const {
    return id < byzantine_.size() && static_cast<bool>(byzantine_[id]);
  }
  // Messages to these recipients wait until nothing else is pending.
  void set_slow(NodeSet slow) { slow_ = slow; }

  void broadcast(NodeId from, const Out& bodies) {
    for (const auto& body : bodies) {
      for (NodeId to = 1; to <= n_; ++to) {
        if (is_byzantine(from)) {
          if (auto b = byzantine_[from](from, to, body)) {
            pending_.push_back({from, to, *b});
          }
        } else {
          pending_.push_back({from, to, body});
        }
      }
    }
  }

  // Injects a message directly, bypassing tampering.
  void send(NodeId from, NodeId to, protocol::Body body) {
    pending_.push_back({from, to, std::move(body)});
  }

  // Runs until quiet or `max_steps` deliveries; returns deliveries made.
  std::size_t run(std::size_t max_steps = 50'000'000) {
    std::size_t steps = 0;
    while (steps < max_steps) {
      // Route fresh messages; slow recipients only get theirs when the
      // rest of the network is quiet.
      for (auto& m : pending_) {
        (slow_.contains(m.to) ? slow_queue_ : fast_queue_).push_back(std::move(m));
      }
      pending_.clear();
      auto& queue = fast_queue_.empty() ? slow_queue_ : fast_queue_;
      if (queue.empty()) break;
      const auto pick = static_cast<std::size_t>(
          rng_.uniform(0, static_cast<std::int64_t>(queue.size()) - 1));
      Pending m = std::move(queue[pick]);
      queue[pick] = std::move(queue.back());
      queue.pop_back();
      ++steps;
      if (is_byzantine(m.to)) continue;
      broadcast(m.to, handler_(m.to, m.from, m.body));
    }
    return steps;
  }

 private:
  struct Pending {
    NodeId from;
    NodeId to;
    protocol::Body body;
  };

  std::size_t n_;
  Rng rng_;
  Handler handler_;
  std::vector<Tamper> byzantine_;
  NodeSet slow_;
  std::vector<Pending> pending_;
  std::vector<Pending> fast_queue_;
  std::vector<Pending> slow_queue_;
};

}  // namespace dcn::sim
