// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/pi_init.hpp"

#include <algorithm>
#include <cmath>

namespace dcn::protocol {

Tick SynchronyParams::wait_ticks() const {
  const Tick base = delta_ext + delta_dcn;
  if (theta == 1.0) return base;
  return static_cast<Tick>(
      std::ceil(static_cast<long double>(theta) * static_cast<long double>(base))) + 1;
}

Tick init_select(std::vector<Tick> values, const GroupParams& group) {
  const std::size_t quorum = group.quorum();
  if (values.size() < quorum) {
    throw ParameterError("init_select: fewer than n-f values");
  }
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() - quorum;
  const std::size_t index = (quorum + 1) / 2 + k / 2;  // 1-based
  return values[index - 1];
}

PiInit::PiInit(GroupParams group, SynchronyParams sync)
    : group_(group), sync_(sync) {}

std::optional<InitTs> PiInit::on_input(Tick tau_in, Tick local_now) {
  if (input_) return std::nullopt;
  input_ = tau_in;
  input_receipt_time_ = local_now;
  return InitTs{tau_in};
}

void PiInit::on_receive(NodeId sender, Tick tau) {
  received_.try_emplace(sender, tau);
}

std::optional<Tick> PiInit::deadline() const {
  if (!input_) return std::nullopt;
  return input_receipt_time_ + sync_.wait_ticks();
}

std::optional<Tick> PiInit::try_output(Tick local_now) {
  if (output_ || !input_) return output_;
  if (local_now < *deadline() || received_.size() < group_.quorum()) {
    return std::nullopt;
  }
  std::vector<Tick> values;
  values.reserve(received_.size());
  for (const auto& [sender, tau] : received_) values.push_back(tau);
  output_ = init_select(std::move(values), group_);
  return output_;
}

}  // namespace dcn::protocol
