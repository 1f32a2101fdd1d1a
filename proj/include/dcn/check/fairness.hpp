// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/sim/event_log.hpp"

namespace dcn::check {

/// Stand-in receipt for an honest node that never heard of the transaction.
inline constexpr Tick kTauMax = std::numeric_limits<Tick>::max();

inline constexpr int kReportVersion = 1;

/// Median index mu = ceil((n - f) / 2), 1-based.
std::size_t median_index(std::size_t n, std::size_t f);

/// Interval [L, U] that delta-median validity allows, given the sorted
/// honest receipts. With m = n - f honest nodes this is
/// [T_{mu-delta}, T_{mu+delta}] with indices clamped to [1, n - f]. With
/// m > n - f honest nodes the bound must hold for every choice of n - f of
/// them, which shifts the lower index up by m - (n - f).
std::pair<Tick, Tick> median_bounds(const std::vector<Tick>& sorted_receipts,
                                    std::size_t n, std::size_t f,
                                    std::size_t delta);

bool check_median_validity(const std::vector<Tick>& sorted_receipts,
                           std::size_t n, std::size_t f, Tick tau,
                           std::size_t delta);

/// Smallest delta in [0, n - f] with tau inside the bounds, if any.
std::optional<std::size_t> achieved_delta(
    const std::vector<Tick>& sorted_receipts, std::size_t n, std::size_t f,
    Tick tau);

/// Synchronous asymmetric window [T_{mu - ceil(f/2)}, T_{mu + floor(f/2)}]
/// under the same clamping and shifting rules.
std::pair<Tick, Tick> sync_bounds(const std::vector<Tick>& sorted_receipts,
                                  std::size_t n, std::size_t f);

enum class Liveness { kDelivered, kStalled, kAborted, kUnobserved };
std::string_view liveness_name(Liveness l);

struct InstanceReport {
  std::string instance;  // hex
  std::int64_t tx_index = 0;
  std::int64_t attempt = 0;
  bool honest_user = true;
  Liveness liveness = Liveness::kStalled;
  bool agreement = true;
  std::optional<Tick> tau;
  std::size_t honest_outputs = 0;
  std::size_t honest_nodes = 0;
  std::vector<Tick> receipts;  // sorted honest receipts, kTauMax filled
  std::optional<std::size_t> achieved_delta;
  bool sync_window_held = false;
  bool sync_bound_ok = true;  // only meaningful when sync_window_held
  std::uint32_t rounds_used = 0;
  std::size_t adversary_shares_before_sig = 0;
};

struct OrderViolation {
  std::string earlier;  // ordered first
  std::string later;
  std::size_t delta = 0;
};

struct Guarantees {
  bool liveness = true;
  bool integrity = true;
  bool unique_timestamp = true;
  bool fair_timestamp = true;
};

struct FairnessReport {
  std::size_t n = 0;
  std::size_t f = 0;
  std::uint64_t seed = 0;
  std::string log_digest;
  std::vector<InstanceReport> instances;
  std::vector<OrderViolation> order_violations;
  Guarantees guarantees;
  bool agreement = true;
  bool secrecy = true;
  std::string block_verdict = "OK";
  bool event_cap_hit = false;
  std::vector<std::string> violations;

  bool clean() const { return violations.empty(); }
};

/// Evaluates a finished run from its log alone.
FairnessReport analyze(const sim::EventLog& log);

/// Pairwise order fairness over the final block order at the given delta.
std::vector<OrderViolation> check_order_fairness(
    const std::vector<std::pair<std::string, std::vector<Tick>>>& ordered,
    std::size_t n, std::size_t f, std::size_t delta);

std::string report_json(const FairnessReport& report);
std::string report_csv_header();
std::string report_csv_rows(const FairnessReport& report,
                            const std::string& scenario);

}  // namespace dcn::check
