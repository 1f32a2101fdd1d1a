// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/protocol/messages.hpp"

namespace dcn::protocol {

/// Delay bounds of the synchronous regime and the clock-rate bound.
struct SynchronyParams {
  Tick delta_ext = 10;
  Tick delta_dcn = 10;
  double theta = 1.0;

  bool valid() const { return delta_ext > 0 && delta_dcn > 0 && theta >= 1.0; }
  // Local ticks to wait after receipt: ceil(theta * (delta_ext + delta_dcn)),
  // plus one tick when theta > 1 to absorb rounding of drifting clocks.
  Tick wait_ticks() const;
};

/// Picks R[ceil((n-f)/2) + floor(k/2)] (1-based) from the sorted received
/// values, where |R| = n - f + k. Requires |values| >= n - f.
Tick init_select(std::vector<Tick> values, const GroupParams& group);

/// First stage: broadcast the receipt timestamp, wait out the synchrony
/// window, then output an adjusted median of what arrived.
class PiInit {
 public:
  PiInit(GroupParams group, SynchronyParams sync);

  /// Records the input and returns the broadcast, or nothing if an input
  /// was already recorded.
  std::optional<InitTs> on_input(Tick tau_in, Tick local_now);

  /// Keeps the first value from each sender.
  void on_receive(NodeId sender, Tick tau);

  /// Fires once both wait conditions hold; the result is latched.
  std::optional<Tick> try_output(Tick local_now);

  bool has_input() const { return input_.has_value(); }
  std::optional<Tick> input() const { return input_; }
  // Local tick at which the wait condition starts to hold.
  std::optional<Tick> deadline() const;
  std::optional<Tick> output() const { return output_; }
  std::size_t received_count() const { return received_.size(); }
  const std::map<NodeId, Tick>& received() const { return received_; }

 private:
  GroupParams group_;
  SynchronyParams sync_;
  std::optional<Tick> input_;
  Tick input_receipt_time_ = 0;
  std::map<NodeId, Tick> received_;
  std::optional<Tick> output_;
};

}  // namespace dcn::protocol
