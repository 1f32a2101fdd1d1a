// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/pi_aa.hpp"

#include <algorithm>

namespace dcn::protocol {

bool AaParams::valid() const {
  // 0 < num/den < 1/2
  return group.valid() && epsilon_num > 0 && epsilon_den > 0 &&
         2 * epsilon_num < epsilon_den && max_rounds >= 1 &&
         max_rounds <= Dyadic::kMaxExponent - 8;
}

Dyadic trimmed_midpoint(std::vector<Dyadic> values, std::size_t f) {
  if (values.size() <= 2 * f) {
    throw ParameterError("trimmed_midpoint: need more than 2f values");
  }
  std::sort(values.begin(), values.end());
  return midpoint(values[f], values[values.size() - 1 - f]);
}

std::uint32_t aa_round_count(const Dyadic& spread, const AaParams& params) {
  std::uint32_t t = 0;
  while (!spread.abs_less_than(params.epsilon_num, params.epsilon_den, t)) ++t;
  return std::min<std::uint32_t>(1 + t, params.max_rounds);
}

PiAa::PiAa(AaParams params, NodeId self) : params_(params), self_(self) {
  if (!params_.valid()) throw ParameterError("PiAa: invalid parameters");
}

PiAa::Round& PiAa::round(std::uint32_t r) {
  auto it = rounds_.find(r);
  if (it == rounds_.end()) {
    it = rounds_.emplace(r, Round{}).first;
    it->second.slots.resize(params_.group.n + 1);
  }
  return it->second;
}

PiAa::Out PiAa::on_input(const Dyadic& value) {
  Out out;
  if (joined_) return out;
  joined_ = true;
  value_ = value;
  current_round_ = 1;
  broadcast_value(1, value_, out);
  // Catch up on traffic recorded before joining.
  for (auto& [r, rd] : rounds_) {
    for (NodeId o = 1; o <= params_.group.n; ++o) act_slot(r, o, out);
    act_report(r, out);
  }
  try_complete(out);
  return out;
}

void PiAa::broadcast_value(std::uint32_t r, const Dyadic& v, Out& out) {
  Round& rd = round(r);
  if (rd.sent_value) return;
  rd.sent_value = true;
  out.push_back(AaRbc{AaRbc::Phase::kSend, r, self_, v});
}

PiAa::Out PiAa::on_message(NodeId sender, const AaRbc& msg) {
  Out out;
  const std::size_t n = params_.group.n;
  // Honest round-r values are midpoints of r-1 generations of integers.
  if (!valid_round(msg.round) || msg.origin < 1 || msg.origin > n ||
      sender < 1 || sender > n || !msg.value.in_range() ||
      msg.value.exponent() + 1 > msg.round) {
    ++discarded_;
    return out;
  }
  Round& rd = round(msg.round);
  Slot& slot = rd.slots[msg.origin];
  auto add = [](std::vector<Tally>& tallies, const Dyadic& v, NodeId from) {
    for (auto& t : tallies) {
      if (t.value == v) {
        t.from.insert(from);
        return;
      }
    }
    Tally t{v, {}};
    t.from.insert(from);
    tallies.push_back(t);
  };
  switch (msg.phase) {
    case AaRbc::Phase::kSend:
      if (sender != msg.origin || slot.send_value) {
        ++discarded_;
        return out;
      }
      slot.send_value = msg.value;
      break;
    case AaRbc::Phase::kEcho:
      if (slot.echoed_by.contains(sender)) return out;
      slot.echoed_by.insert(sender);
      add(slot.echoes, msg.value, sender);
      break;
    case AaRbc::Phase::kReady:
      if (slot.readied_by.contains(sender)) return out;
      slot.readied_by.insert(sender);
      add(slot.readies, msg.value, sender);
      break;
  }
  act_slot(msg.round, msg.origin, out);
  act_report(msg.round, out);
  help(msg.round, out);
  try_complete(out);
  return out;
}

PiAa::Out PiAa::on_message(NodeId sender, const AaWitness& msg) {
  Out out;
  const std::size_t n = params_.group.n;
  if (!valid_round(msg.round) || sender < 1 || sender > n ||
      msg.senders.size() < params_.group.quorum() || msg.senders.contains(0)) {
    ++discarded_;
    return out;
  }
  for (NodeId id : msg.senders.members()) {
    if (id > n) {
      ++discarded_;
      return out;
    }
  }
  Round& rd = round(msg.round);
  rd.reports.try_emplace(sender, msg.senders);
  help(msg.round, out);
  try_complete(out);
  return out;
}

void PiAa::act_slot(std::uint32_t r, NodeId origin, Out& out) {
  Round& rd = round(r);
  Slot& slot = rd.slots[origin];
  const std::size_t quorum = params_.group.quorum();
  const std::size_t f = params_.group.f;
  if (joined_) {
    if (slot.send_value && !slot.sent_echo) {
      slot.sent_echo = true;
      out.push_back(AaRbc{AaRbc::Phase::kEcho, r, origin, *slot.send_value});
    }
    if (!slot.sent_ready) {
      const Tally* pick = nullptr;
      for (const auto& t : slot.echoes) {
        if (t.from.size() >= quorum) pick = &t;
      }
      for (const auto& t : slot.readies) {
        if (!pick && t.from.size() >= f + 1) pick = &t;
      }
      if (pick) {
        slot.sent_ready = true;
        out.push_back(AaRbc{AaRbc::Phase::kReady, r, origin, pick->value});
      }
    }
  }
  if (!slot.delivered) {
    for (const auto& t : slot.readies) {
      if (t.from.size() >= 2 * f + 1) {
        slot.delivered = t.value;
        rd.delivered.insert(origin);
        break;
      }
    }
  }
}

void PiAa::act_report(std::uint32_t r, Out& out) {
  Round& rd = round(r);
  if (!joined_ || rd.sent_report ||
      rd.delivered.size() < params_.group.quorum()) {
    return;
  }
  rd.sent_report = true;
  out.push_back(AaWitness{r, rd.delivered});
}

void PiAa::help(std::uint32_t r, Out& out) {
  if (output_ && r > budget_) broadcast_value(r, *output_, out);
}

void PiAa::try_complete(Out& out) {
  const std::size_t quorum = params_.group.quorum();
  while (joined_ && !output_) {
    const std::uint32_t r = current_round_;
    Round& rd = round(r);
    std::size_t covered = 0;
    for (const auto& [reporter, set] : rd.reports) {
      if (set.subset_of(rd.delivered)) ++covered;
    }
    if (covered < quorum) return;

    std::vector<Dyadic> values;
    values.reserve(rd.delivered.size());
    for (NodeId o : rd.delivered.members()) {
      values.push_back(*rd.slots[o].delivered);
    }
    if (r == 1) {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      budget_ = aa_round_count(*hi - *lo, params_);
    }
    value_ = trimmed_midpoint(std::move(values), params_.group.f);

    if (r >= budget_) {
      output_ = value_;
      for (auto& [later, unused] : rounds_) help(later, out);
      return;
    }
    current_round_ = r + 1;
    broadcast_value(current_round_, value_, out);
    for (NodeId o = 1; o <= params_.group.n; ++o) {
      act_slot(current_round_, o, out);
    }
    act_report(current_round_, out);
  }
}

}  // namespace dcn::protocol
