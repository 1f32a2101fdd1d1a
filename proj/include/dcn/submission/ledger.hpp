// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/crypto/signatures.hpp"

namespace dcn::submission {

using crypto::Bytes;
using crypto::InstanceHash;

/// A timestamped transaction as submitted to the mempool. The nonce travels
/// with it so validators can recompute h and check the signature on (h, tau).
struct MempoolEntry {
  Bytes tx;
  Bytes nonce;
  InstanceHash h;
  Tick tau = 0;
  crypto::ThresholdSignature sig;
  NodeId submitter = kNoNode;
};

struct Block {
  std::vector<MempoolEntry> entries;
  Tick prev_max_tau = 0;
};

enum class BlockVerdict { kAccept, kSig, kHash, kOrder, kBoundary, kDuplicate };

std::string_view verdict_name(BlockVerdict v);

struct BlockCheck {
  BlockVerdict verdict = BlockVerdict::kAccept;
  std::size_t index = 0;  // first offending entry
};

/// True iff h matches (tx, nonce) and sig verifies on (h, tau).
bool entry_valid(const MempoolEntry& entry,
                 const crypto::ThresholdScheme& scheme);

/// Accepts iff every signature verifies, taus are non-decreasing, the first
/// tau is at least prev_max_tau and no transaction appears twice.
BlockCheck validator_check_block(const Block& block, Tick prev_max_tau,
                                 const crypto::ThresholdScheme& scheme);

/// In-simulator mempool. Every submission is recorded; valid ones are kept
/// once per instance hash.
class Mempool {
 public:
  struct Record {
    MempoolEntry entry;
    Tick at = 0;
    bool valid = false;
    bool duplicate = false;
  };

  explicit Mempool(std::shared_ptr<const crypto::ThresholdScheme> scheme)
      : scheme_(std::move(scheme)) {}

  const Record& submit(MempoolEntry entry, Tick now);

  const std::vector<Record>& records() const { return records_; }
  std::vector<MempoolEntry> accepted() const;
  bool contains(const InstanceHash& h) const { return by_hash_.count(h) > 0; }

  /// Greedy policy: all accepted entries ordered by (tau, h).
  Block build_block(Tick prev_max_tau) const;

 private:
  std::shared_ptr<const crypto::ThresholdScheme> scheme_;
  std::vector<Record> records_;
  std::map<InstanceHash, std::size_t> by_hash_;
};

}  // namespace dcn::submission
