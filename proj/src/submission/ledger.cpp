// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/submission/ledger.hpp"

#include <algorithm>
#include <set>

#include "dcn/submission/envelope.hpp"

namespace dcn::submission {

std::string_view verdict_name(BlockVerdict v) {
  switch (v) {
    case BlockVerdict::kAccept: return "OK";
    case BlockVerdict::kSig: return "SIG";
    case BlockVerdict::kHash: return "HASH";
    case BlockVerdict::kOrder: return "ORDER";
    case BlockVerdict::kBoundary: return "BOUNDARY";
    case BlockVerdict::kDuplicate: return "DUPLICATE";
  }
  return "?";
}

bool entry_valid(const MempoolEntry& entry,
                 const crypto::ThresholdScheme& scheme) {
  return crypto::hash_instance(entry.tx, entry.nonce) == entry.h &&
         scheme.verify(entry.sig, stamp_message(entry.h, entry.tau));
}

BlockCheck validator_check_block(const Block& block, Tick prev_max_tau,
                                 const crypto::ThresholdScheme& scheme) {
  std::set<Bytes> seen;
  for (std::size_t i = 0; i < block.entries.size(); ++i) {
    const MempoolEntry& e = block.entries[i];
    if (crypto::hash_instance(e.tx, e.nonce) != e.h) {
      return {BlockVerdict::kHash, i};
    }
    if (!scheme.verify(e.sig, stamp_message(e.h, e.tau))) {
      return {BlockVerdict::kSig, i};
    }
    if (i == 0 && e.tau < prev_max_tau) return {BlockVerdict::kBoundary, i};
    if (i > 0 && e.tau < block.entries[i - 1].tau) {
      return {BlockVerdict::kOrder, i};
    }
    if (!seen.insert(e.tx).second) return {BlockVerdict::kDuplicate, i};
  }
  return {BlockVerdict::kAccept, 0};
}

const Mempool::Record& Mempool::submit(MempoolEntry entry, Tick now) {
  Record rec;
  rec.valid = entry_valid(entry, *scheme_);
  rec.at = now;
  rec.duplicate = rec.valid && by_hash_.count(entry.h) > 0;
  if (rec.valid && !rec.duplicate) by_hash_[entry.h] = records_.size();
  rec.entry = std::move(entry);
  records_.push_back(std::move(rec));
  return records_.back();
}

std::vector<MempoolEntry> Mempool::accepted() const {
  std::vector<MempoolEntry> out;
  for (const auto& [h, idx] : by_hash_) out.push_back(records_[idx].entry);
  return out;
}

Block Mempool::build_block(Tick prev_max_tau) const {
  Block block;
  block.prev_max_tau = prev_max_tau;
  block.entries = accepted();
  std::sort(block.entries.begin(), block.entries.end(),
            [](const MempoolEntry& a, const MempoolEntry& b) {
              return a.tau != b.tau ? a.tau < b.tau : a.h < b.h;
            });
  // A resubmitted transaction may have landed twice under different
  // nonces; it executes once.
  std::set<Bytes> seen;
  std::erase_if(block.entries,
                [&seen](const MempoolEntry& e) { return !seen.insert(e.tx).second; });
  return block;
}

}  // namespace dcn::submission
