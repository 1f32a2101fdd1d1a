// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/pi_aba.hpp"

namespace dcn::protocol {

std::uint8_t IdealCoin::flip(const crypto::InstanceHash& instance,
                             std::uint32_t phase) const {
  crypto::Encoder enc("dcn/coin/v1");
  enc.u64(seed_).raw(instance.digest).u32(phase);
  return crypto::sha256(enc.data())[31] & 1;
}

PiAba::PiAba(AbaParams params, crypto::InstanceHash instance,
             std::shared_ptr<const CommonCoin> coin)
    : params_(params), instance_(instance), coin_(std::move(coin)) {}

PiAba::Phase& PiAba::phase_state(std::uint32_t r) { return phases_[r]; }

std::size_t PiAba::bval_count(std::uint32_t r, std::uint8_t b) {
  NodeSet from = phase_state(r).bval_from[b];
  for (const auto& [sender, term] : terms_) {
    if (term.second == b && term.first <= r) from.insert(sender);
  }
  return from.size();
}

std::size_t PiAba::aux_count(std::uint32_t r, std::uint8_t b) {
  NodeSet from = phase_state(r).aux_from[b];
  for (const auto& [sender, term] : terms_) {
    // A TERM sender's virtual AUX replaces whatever it sent for r.
    if (term.first <= r && !phase_state(r).aux_senders.contains(sender) &&
        term.second == b) {
      from.insert(sender);
    }
  }
  return from.size();
}

void PiAba::send_bval(std::uint32_t r, std::uint8_t b, Out& out) {
  Phase& ph = phase_state(r);
  if (ph.bval_sent[b]) return;
  ph.bval_sent[b] = true;
  out.push_back(AbaBval{r, b});
}

PiAba::Out PiAba::on_input(std::uint8_t bit) {
  Out out;
  if (phase_ > 0) return out;
  phase_ = 1;
  estimate_ = bit & 1;
  send_bval(1, estimate_, out);
  act(1, out);
  try_advance(out);
  return out;
}

PiAba::Out PiAba::on_message(NodeId sender, const AbaBval& msg) {
  Out out;
  if (msg.phase < 1 || msg.phase > params_.max_phases || msg.bit > 1 ||
      sender < 1 || sender > params_.group.n) {
    ++discarded_;
    return out;
  }
  phase_state(msg.phase).bval_from[msg.bit].insert(sender);
  if (phase_ > 0 && msg.phase <= phase_) {
    act(msg.phase, out);
    try_advance(out);
  }
  return out;
}

PiAba::Out PiAba::on_message(NodeId sender, const AbaAux& msg) {
  Out out;
  if (msg.phase < 1 || msg.phase > params_.max_phases || msg.bit > 1 ||
      sender < 1 || sender > params_.group.n) {
    ++discarded_;
    return out;
  }
  Phase& ph = phase_state(msg.phase);
  if (ph.aux_senders.contains(sender)) return out;
  ph.aux_senders.insert(sender);
  ph.aux_from[msg.bit].insert(sender);
  if (phase_ > 0 && msg.phase == phase_) try_advance(out);
  return out;
}

PiAba::Out PiAba::on_message(NodeId sender, const AbaTerm& msg) {
  Out out;
  if (msg.from_phase < 1 || msg.bit > 1 || sender < 1 ||
      sender > params_.group.n) {
    ++discarded_;
    return out;
  }
  if (!terms_.try_emplace(sender, msg.from_phase, msg.bit).second) return out;
  if (phase_ > 0) {
    for (std::uint32_t r = msg.from_phase; r <= phase_; ++r) act(r, out);
    try_advance(out);
  }
  return out;
}

// BV-broadcast bookkeeping for a phase this node has reached.
void PiAba::act(std::uint32_t r, Out& out) {
  const std::size_t f = params_.group.f;
  for (std::uint8_t b = 0; b < 2; ++b) {
    const std::size_t count = bval_count(r, b);
    if (count >= f + 1 && (!decided_ || r <= decision_phase_)) {
      send_bval(r, b, out);
    }
    if (count >= 2 * f + 1) {
      Phase& ph = phase_state(r);
      ph.bin[b] = true;
      if (!ph.aux_sent && r == phase_ && !decided_) {
        ph.aux_sent = true;
        out.push_back(AbaAux{r, b});
      }
    }
  }
}

void PiAba::try_advance(Out& out) {
  while (!decided_ && phase_ > 0) {
    const std::uint32_t r = phase_;
    Phase& ph = phase_state(r);
    if (!ph.aux_sent) return;
    std::size_t consistent = 0;
    std::array<bool, 2> vals{false, false};
    for (std::uint8_t b = 0; b < 2; ++b) {
      if (!ph.bin[b]) continue;
      const std::size_t c = aux_count(r, b);
      consistent += c;
      vals[b] = c > 0;
    }
    if (consistent < params_.group.quorum()) return;

    const std::uint8_t coin = coin_->flip(instance_, r) & 1;
    if (vals[0] != vals[1]) {
      const std::uint8_t v = vals[1] ? 1 : 0;
      estimate_ = v;
      if (v == coin) {
        decided_ = v;
        decision_phase_ = r;
        out.push_back(AbaTerm{r + 1, v});
        return;
      }
    } else {
      estimate_ = coin;
    }
    if (r >= params_.max_phases) return;
    phase_ = r + 1;
    send_bval(phase_, estimate_, out);
    act(phase_, out);
  }
}

}  // namespace dcn::protocol
