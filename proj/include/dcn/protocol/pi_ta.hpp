// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dcn/core/dyadic.hpp"
#include "dcn/core/types.hpp"
#include "dcn/protocol/messages.hpp"
#include "dcn/protocol/pi_aa.hpp"
#include "dcn/protocol/pi_aba.hpp"
#include "dcn/protocol/pi_init.hpp"

namespace dcn::protocol {

/// alpha <= tau_aa < alpha + 1; beta is the nearer of alpha and alpha + 1
/// (alpha + 1 on an exact tie), beta_prime the other, b the parity of beta.
struct RoundingChoice {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
  std::int64_t beta_prime = 0;
  std::uint8_t b = 0;

  friend bool operator==(const RoundingChoice&, const RoundingChoice&) = default;
};

RoundingChoice ta_choose_rounding(const Dyadic& tau_aa);
// Same rule for an arbitrary rational num/den, den > 0.
RoundingChoice ta_choose_rounding(std::int64_t num, std::int64_t den);

/// beta if the decided parity matches b, else beta_prime.
Tick ta_finalize(std::uint8_t b, std::uint8_t decided, Tick beta,
                 Tick beta_prime);

struct TaParams {
  GroupParams group;
  SynchronyParams sync;
  std::int64_t epsilon_num = 49;
  std::int64_t epsilon_den = 100;
  std::uint32_t aa_max_rounds = 72;
  std::uint32_t aba_max_phases = 256;

  AaParams aa() const {
    return AaParams{group, epsilon_num, epsilon_den, aa_max_rounds};
  }
  AbaParams aba() const { return AbaParams{group, aba_max_phases}; }
};

enum class TaStage { kAwaitingInit, kAwaitingAa, kAwaitingAba, kDone };

struct StageEvent {
  enum class Kind { kInitOutput, kAaOutput, kAbaDecide, kTaOutput };
  Kind kind;
  std::int64_t value = 0;  // tau_mu, floor(tau_aa), decided bit, tau_out
  std::int64_t detail = 0;  // AA rounds, ABA phase, or total rounds
  Dyadic exact;             // tau_aa for kAaOutput
};

/// Timestamp agreement for one instance at one node: the receipt-median
/// stage, then approximate agreement, then agreement on the rounding parity.
/// Stage outputs are latched. INIT_TS messages arriving after the first
/// stage has output are counted and dropped; later-stage traffic is always
/// processed because finished nodes keep helping.
class PiTa {
 public:
  using Out = std::vector<Body>;

  PiTa(TaParams params, NodeId self, crypto::InstanceHash instance,
       std::shared_ptr<const CommonCoin> coin);

  Out on_input(Tick tau_in, Tick local_now);
  Out on_message(NodeId sender, const Body& body, Tick local_now);
  Out on_timer(Tick local_now);

  std::optional<Tick> init_deadline() const { return init_.deadline(); }
  TaStage stage() const { return stage_; }
  std::optional<Tick> output() const { return output_; }
  std::optional<RoundingChoice> rounding() const { return rounding_; }
  // 1 (receipt stage) + AA rounds + ABA phases, once output.
  std::uint32_t rounds_used() const;
  std::uint64_t late_messages() const { return late_; }

  const PiInit& init() const { return init_; }
  const PiAa& aa() const { return aa_; }
  const PiAba& aba() const { return aba_; }

  std::vector<StageEvent> drain_events() { return std::move(events_); }

 private:
  void progress(Tick local_now, Out& out);
  void append(Out& out, Out more);

  TaParams params_;
  PiInit init_;
  PiAa aa_;
  PiAba aba_;
  TaStage stage_ = TaStage::kAwaitingInit;
  std::optional<RoundingChoice> rounding_;
  std::optional<Tick> output_;
  std::uint64_t late_ = 0;
  std::vector<StageEvent> events_;
};

}  // namespace dcn::protocol
