// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"

namespace dcn::sim {

enum class EventKind : std::uint8_t {
  kRunStart,        // a = seed, digest = config digest
  kParams,          // a = n, b = f, c = delta_ext, d = delta_dcn
  kUserCreate,      // a = tx index, b = attempt, c = 1 if the user is honest,
                    // digest = tx digest
  kDeliver,         // peer = sender, a = sent tick, b = kind index,
                    // c = message value, digest = message digest
  kReceipt,         // a = local receipt tick
  kBadUserMessage,
  kInitOutput,      // a = tau_mu
  kAaOutput,        // a = floor, b = AA rounds
  kAbaDecide,       // a = bit, b = phase
  kTaOutput,        // a = tau, b = rounds used
  kPartialRejected, // peer = signer, a = claimed tau
  kSigReady,        // a = tau
  kShareAccepted,   // peer = sender, a = share index
  kReconstruct,     // a = tau
  kAbort,           // a = tau
  kMempoolSubmit,   // peer = submitter, a = tau, b = verified, c = duplicate,
                    // digest = tx digest
  kCorrupt,         // node became byzantine
  kBlockEntry,      // a = position, b = tau, digest = tx digest
  kBlockCheck,      // a = verdict index, b = offending index, c = entries
  kRunEnd,          // a = events processed, b = 1 if the event cap was hit
};

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> event_kind_from_name(std::string_view name);

struct EventRecord {
  Tick tick = 0;
  std::uint64_t seq = 0;
  Tick local_tick = 0;
  NodeId node = kNoNode;
  EventKind kind = EventKind::kRunStart;
  crypto::InstanceHash instance;
  NodeId peer = kNoNode;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
  std::uint64_t digest = 0;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Append-only, totally ordered by (tick, seq).
class EventLog {
 public:
  // Assigns the next sequence number and returns it.
  std::uint64_t append(EventRecord record);

  const std::vector<EventRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// SHA-256 over the canonical binary encoding of every record.
  crypto::Digest digest() const;
  std::string digest_hex() const;

  std::string to_jsonl() const;
  static EventLog from_jsonl(std::string_view text);

 private:
  std::vector<EventRecord> records_;
};

}  // namespace dcn::sim
