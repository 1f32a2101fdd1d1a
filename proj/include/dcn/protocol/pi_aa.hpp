// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dcn/core/dyadic.hpp"
#include "dcn/core/types.hpp"
#include "dcn/protocol/messages.hpp"

namespace dcn::protocol {

struct AaParams {
  GroupParams group;
  // Agreement precision as a fraction; must lie in (0, 1/2).
  std::int64_t epsilon_num = 49;
  std::int64_t epsilon_den = 100;
  // Messages for later rounds are discarded.
  std::uint32_t max_rounds = 72;

  bool valid() const;
};

/// Trimmed midpoint: drop the f lowest and f highest values, then average
/// the extremes of what remains. Requires more than 2f values.
Dyadic trimmed_midpoint(std::vector<Dyadic> values, std::size_t f);

/// Number of rounds a node runs given the spread it saw in round 1:
/// 1 + the smallest t >= 0 with spread < epsilon * 2^t.
std::uint32_t aa_round_count(const Dyadic& spread, const AaParams& params);

/// Asynchronous approximate agreement on dyadic values.
///
/// Each round every participant reliably broadcasts its value (send, echo,
/// ready). A node reports the set of origins it has delivered once that set
/// reaches n - f, and completes the round when n - f reports are covered by
/// its own delivered set. It then moves to the trimmed midpoint of every
/// value it delivered.
///
/// Round 1 also fixes this node's round budget from the spread of its
/// delivered values (all later honest values lie inside that spread). Nodes
/// may end with different budgets; a finished node keeps answering later
/// rounds with its final value so that slower nodes still gather quorums.
///
/// Before `on_input`, a node records traffic but sends nothing.
class PiAa {
 public:
  using Out = std::vector<Body>;

  PiAa(AaParams params, NodeId self);

  Out on_input(const Dyadic& value);
  Out on_message(NodeId sender, const AaRbc& msg);
  Out on_message(NodeId sender, const AaWitness& msg);

  bool joined() const { return joined_; }
  std::optional<Dyadic> output() const { return output_; }
  // Rounds this node ran (its budget) once known, else 0.
  std::uint32_t round_budget() const { return budget_; }
  std::uint32_t current_round() const { return current_round_; }
  std::uint64_t discarded() const { return discarded_; }

 private:
  struct Tally {
    Dyadic value;
    NodeSet from;
  };
  struct Slot {
    std::optional<Dyadic> send_value;
    NodeSet echoed_by;
    NodeSet readied_by;
    std::vector<Tally> echoes;
    std::vector<Tally> readies;
    bool sent_echo = false;
    bool sent_ready = false;
    std::optional<Dyadic> delivered;
  };
  struct Round {
    std::vector<Slot> slots;
    NodeSet delivered;
    std::map<NodeId, NodeSet> reports;
    bool sent_report = false;
    bool sent_value = false;
  };

  Round& round(std::uint32_t r);
  void act_slot(std::uint32_t r, NodeId origin, Out& out);
  void act_report(std::uint32_t r, Out& out);
  void broadcast_value(std::uint32_t r, const Dyadic& v, Out& out);
  void help(std::uint32_t r, Out& out);
  void try_complete(Out& out);
  bool valid_round(std::uint32_t r) const {
    return r >= 1 && r <= params_.max_rounds;
  }

  AaParams params_;
  NodeId self_;
  bool joined_ = false;
  std::uint32_t current_round_ = 0;
  std::uint32_t budget_ = 0;
  Dyadic value_;
  std::optional<Dyadic> output_;
  std::map<std::uint32_t, Round> rounds_;
  std::uint64_t discarded_ = 0;
};

}  // namespace dcn::protocol
