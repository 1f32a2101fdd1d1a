// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/pi_ta.hpp"

#include <compare>
#include <type_traits>

namespace dcn::protocol {
namespace {

RoundingChoice from_floor(std::int64_t alpha, bool below_half) {
  RoundingChoice c;
  c.alpha = alpha;
  c.beta = below_half ? alpha : alpha + 1;
  c.beta_prime = below_half ? alpha + 1 : alpha;
  c.b = static_cast<std::uint8_t>(c.beta & 1);
  return c;
}

}  // namespace

RoundingChoice ta_choose_rounding(const Dyadic& tau_aa) {
  // tau - alpha < alpha + 1 - tau  <=>  frac < 1/2
  return from_floor(tau_aa.floor(), tau_aa.fraction_vs_half() < 0);
}

RoundingChoice ta_choose_rounding(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw ParameterError("ta_choose_rounding: den must be > 0");
  std::int64_t alpha = num / den;
  std::int64_t rem = num % den;
  if (rem < 0) {
    --alpha;
    rem += den;
  }
  // rem/den < 1/2  <=>  2*rem < den
  return from_floor(alpha, static_cast<__int128>(2) * rem < den);
}

Tick ta_finalize(std::uint8_t b, std::uint8_t decided, Tick beta,
                 Tick beta_prime) {
  return b == decided ? beta : beta_prime;
}

PiTa::PiTa(TaParams params, NodeId self, crypto::InstanceHash instance,
           std::shared_ptr<const CommonCoin> coin)
    : params_(params),
      init_(params.group, params.sync),
      aa_(params.aa(), self),
      aba_(params.aba(), instance, std::move(coin)) {}

void PiTa::append(Out& out, Out more) {
  for (auto& b : more) out.push_back(std::move(b));
}

PiTa::Out PiTa::on_input(Tick tau_in, Tick local_now) {
  Out out;
  if (auto msg = init_.on_input(tau_in, local_now)) out.push_back(*msg);
  progress(local_now, out);
  return out;
}

PiTa::Out PiTa::on_timer(Tick local_now) {
  Out out;
  progress(local_now, out);
  return out;
}

PiTa::Out PiTa::on_message(NodeId sender, const Body& body, Tick local_now) {
  Out out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, InitTs>) {
          if (init_.output()) {
            ++late_;
            return;
          }
          init_.on_receive(sender, m.timestamp);
        } else if constexpr (std::is_same_v<T, AaRbc> ||
                             std::is_same_v<T, AaWitness>) {
          append(out, aa_.on_message(sender, m));
        } else if constexpr (std::is_same_v<T, AbaBval> ||
                             std::is_same_v<T, AbaAux> ||
                             std::is_same_v<T, AbaTerm>) {
          append(out, aba_.on_message(sender, m));
        }
      },
      body);
  progress(local_now, out);
  return out;
}

void PiTa::progress(Tick local_now, Out& out) {
  if (stage_ == TaStage::kAwaitingInit) {
    const auto tau_mu = init_.try_output(local_now);
    if (!tau_mu) return;
    events_.push_back({StageEvent::Kind::kInitOutput, *tau_mu, 0, {}});
    stage_ = TaStage::kAwaitingAa;
    append(out, aa_.on_input(Dyadic::from_int(*tau_mu)));
  }
  if (stage_ == TaStage::kAwaitingAa) {
    const auto tau_aa = aa_.output();
    if (!tau_aa) return;
    events_.push_back({StageEvent::Kind::kAaOutput, tau_aa->floor(),
                       aa_.round_budget(), *tau_aa});
    rounding_ = ta_choose_rounding(*tau_aa);
    stage_ = TaStage::kAwaitingAba;
    append(out, aba_.on_input(rounding_->b));
  }
  if (stage_ == TaStage::kAwaitingAba) {
    const auto decided = aba_.decided();
    if (!decided) return;
    events_.push_back({StageEvent::Kind::kAbaDecide, *decided,
                       aba_.decision_phase(), {}});
    output_ = ta_finalize(rounding_->b, *decided, rounding_->beta,
                          rounding_->beta_prime);
    stage_ = TaStage::kDone;
    events_.push_back(
        {StageEvent::Kind::kTaOutput, *output_, rounds_used(), {}});
  }
}

std::uint32_t PiTa::rounds_used() const {
  if (!output_) return 0;
  return 1 + aa_.round_budget() + aba_.decision_phase();
}

}  // namespace dcn::protocol
