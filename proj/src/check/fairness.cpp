// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/check/fairness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dcn::check {
namespace {

using sim::EventKind;
using sim::EventRecord;

// Body alternative indices as they appear in DELIVER records.
constexpr std::int64_t kUserSubmit = 0;
constexpr std::int64_t kInitTs = 1;
constexpr std::int64_t kShareReveal = 8;

std::int64_t clamp_index(std::int64_t i, std::size_t hi) {
  return std::clamp<std::int64_t>(i, 1, static_cast<std::int64_t>(hi));
}

std::pair<Tick, Tick> bounds_at(const std::vector<Tick>& t, std::size_t n,
                                std::size_t f, std::int64_t lo, std::int64_t hi) {
  const std::size_t quorum = n - f;
  const std::size_t shift = t.size() > quorum ? t.size() - quorum : 0;
  const auto l = static_cast<std::size_t>(clamp_index(lo, quorum)) + shift;
  const auto u = static_cast<std::size_t>(clamp_index(hi, quorum));
  auto at = [&t](std::size_t i) { return t[std::min(i, t.size()) - 1]; };
  return {at(l), at(u)};
}

struct NodeTrace {
  std::optional<Tick> receipt_local;
  std::optional<Tick> receipt_tick;
  std::optional<Tick> init_output_tick;
  std::optional<Tick> tau;
  std::uint32_t rounds = 0;
  std::optional<std::uint64_t> sig_ready_seq;
  std::optional<std::uint64_t> reconstruct_seq;
  bool aborted = false;
  std::optional<Tick> user_delay;
};

struct Submission {
  Tick tau = 0;
  bool verified = false;
  std::uint64_t tx = 0;
};

struct Instance {
  crypto::InstanceHash h;
  std::int64_t tx_index = 0;
  std::int64_t attempt = 0;
  bool honest_user = true;
  std::uint64_t tx = 0;
  std::map<NodeId, NodeTrace> nodes;
  std::vector<Submission> submissions;
  Tick max_honest_init_delay = 0;
  // Share index -> earliest seq at which some corrupted node held it.
  std::map<std::int64_t, std::uint64_t> adversary_shares;
};

}  // namespace

std::size_t median_index(std::size_t n, std::size_t f) {
  return (n - f + 1) / 2;
}

std::pair<Tick, Tick> median_bounds(const std::vector<Tick>& sorted_receipts,
                                    std::size_t n, std::size_t f,
                                    std::size_t delta) {
  const auto mu = static_cast<std::int64_t>(median_index(n, f));
  const auto d = static_cast<std::int64_t>(delta);
  return bounds_at(sorted_receipts, n, f, mu - d, mu + d);
}

bool check_median_validity(const std::vector<Tick>& sorted_receipts,
                           std::size_t n, std::size_t f, Tick tau,
                           std::size_t delta) {
  const auto [lo, hi] = median_bounds(sorted_receipts, n, f, delta);
  return lo <= tau && tau <= hi;
}

std::optional<std::size_t> achieved_delta(
    const std::vector<Tick>& sorted_receipts, std::size_t n, std::size_t f,
    Tick tau) {
  for (std::size_t d = 0; d <= n - f; ++d) {
    if (check_median_validity(sorted_receipts, n, f, tau, d)) return d;
  }
  return std::nullopt;
}

std::pair<Tick, Tick> sync_bounds(const std::vector<Tick>& sorted_receipts,
                                  std::size_t n, std::size_t f) {
  const auto mu = static_cast<std::int64_t>(median_index(n, f));
  const auto up = static_cast<std::int64_t>(f / 2);
  const auto down = static_cast<std::int64_t>((f + 1) / 2);
  return bounds_at(sorted_receipts, n, f, mu - down, mu + up);
}

std::string_view liveness_name(Liveness l) {
  switch (l) {
    case Liveness::kDelivered: return "delivered";
    case Liveness::kStalled: return "stalled";
    case Liveness::kAborted: return "aborted";
    case Liveness::kUnobserved: return "unobserved";
  }
  return "?";
}

std::vector<OrderViolation> check_order_fairness(
    const std::vector<std::pair<std::string, std::vector<Tick>>>& ordered,
    std::size_t n, std::size_t f, std::size_t delta) {
  std::vector<OrderViolation> out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto [lo_i, hi_i] = median_bounds(ordered[i].second, n, f, delta);
    (void)hi_i;
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      // ordered[i] went first; that is unfair if j's window closed before
      // i's opened.
      const auto [lo_j, hi_j] = median_bounds(ordered[j].second, n, f, delta);
      (void)lo_j;
      if (hi_j < lo_i) out.push_back({ordered[i].first, ordered[j].first, delta});
    }
  }
  return out;
}

FairnessReport analyze(const sim::EventLog& log) {
  FairnessReport report;
  Tick delta_ext = 0, delta_dcn = 0;
  std::set<NodeId> corrupted;
  std::map<crypto::InstanceHash, Instance> instances;
  std::vector<crypto::InstanceHash> creation_order;
  std::vector<std::pair<crypto::InstanceHash, Tick>> block;
  std::int64_t block_verdict = 0;
  std::vector<const EventRecord*> adversary_deliveries;

  for (const EventRecord& r : log.records()) {
    switch (r.kind) {
      case EventKind::kRunStart:
        report.seed = static_cast<std::uint64_t>(r.a);
        break;
      case EventKind::kParams:
        report.n = static_cast<std::size_t>(r.a);
        report.f = static_cast<std::size_t>(r.b);
        delta_ext = r.c;
        delta_dcn = r.d;
        break;
      case EventKind::kCorrupt:
        corrupted.insert(r.node);
        break;
      case EventKind::kRunEnd:
        report.event_cap_hit = r.b != 0;
        break;
      case EventKind::kBlockEntry:
        block.emplace_back(r.instance, r.b);
        break;
      case EventKind::kBlockCheck:
        block_verdict = r.a;
        break;
      default:
        break;
    }
    if (r.kind == EventKind::kUserCreate) {
      Instance inst;
      inst.h = r.instance;
      inst.tx_index = r.a;
      inst.attempt = r.b;
      inst.honest_user = r.c == 1;
      inst.tx = r.digest;
      if (instances.emplace(r.instance, inst).second) {
        creation_order.push_back(r.instance);
      }
      continue;
    }
    auto it = instances.find(r.instance);
    if (it == instances.end()) {
      if (r.kind == EventKind::kMempoolSubmit && r.b == 1) {
        report.guarantees.integrity = false;
        report.violations.push_back("integrity: verified submission for unknown instance " +
                                    r.instance.hex());
      }
      continue;
    }
    Instance& inst = it->second;
    NodeTrace& node = inst.nodes[r.node];
    switch (r.kind) {
      case EventKind::kDeliver:
        if (r.b == kUserSubmit && r.peer == kNoNode) {
          node.user_delay = r.tick - r.a;
        } else if (r.b == kInitTs) {
          // Filtered to honest endpoints once corruption is known.
          adversary_deliveries.push_back(&r);
        }
        if (r.b == kUserSubmit || r.b == kShareReveal) {
          adversary_deliveries.push_back(&r);
        }
        break;
      case EventKind::kReceipt:
        node.receipt_local = r.a;
        node.receipt_tick = r.tick;
        break;
      case EventKind::kInitOutput:
        node.init_output_tick = r.tick;
        break;
      case EventKind::kTaOutput:
        node.tau = r.a;
        node.rounds = static_cast<std::uint32_t>(r.b);
        break;
      case EventKind::kSigReady:
        node.sig_ready_seq = r.seq;
        break;
      case EventKind::kReconstruct:
        node.reconstruct_seq = r.seq;
        break;
      case EventKind::kAbort:
        node.aborted = true;
        break;
      case EventKind::kMempoolSubmit:
        inst.submissions.push_back({r.a, r.b == 1, r.digest});
        break;
      default:
        break;
    }
  }

  const std::size_t n = report.n, f = report.f;
  auto honest = [&corrupted](NodeId v) { return v != kNoNode && !corrupted.count(v); };

  for (const EventRecord* r : adversary_deliveries) {
    Instance& inst = instances.at(r->instance);
    if (r->b == kInitTs) {
      if (honest(r->node) && honest(r->peer)) {
        inst.max_honest_init_delay = std::max(inst.max_honest_init_delay, r->tick - r->a);
      }
    } else if (corrupted.count(r->node)) {
      inst.adversary_shares.try_emplace(r->c, r->seq);
    }
  }

  std::map<std::int64_t, bool> honest_tx_delivered;
  std::map<crypto::InstanceHash, std::size_t> index_of;
  for (const auto& h : creation_order) {
    Instance& inst = instances.at(h);
    InstanceReport ir;
    ir.instance = h.hex();
    ir.tx_index = inst.tx_index;
    ir.attempt = inst.attempt;
    ir.honest_user = inst.honest_user;

    std::set<Tick> taus;
    bool observed = false;
    bool all_received = true;
    bool timing_ok = true;
    bool any_abort = false;
    std::optional<std::uint64_t> first_sig_ready;
    for (NodeId v = 1; v <= n; ++v) {
      if (!honest(v)) continue;
      ++ir.honest_nodes;
      const auto found = inst.nodes.find(v);
      const NodeTrace empty;
      const NodeTrace& t = found == inst.nodes.end() ? empty : found->second;
      if (t.receipt_local) {
        observed = true;
        ir.receipts.push_back(*t.receipt_local);
      } else {
        ir.receipts.push_back(kTauMax);
        all_received = false;
      }
      if (!t.user_delay || *t.user_delay > delta_ext) timing_ok = false;
      if (t.init_output_tick && t.receipt_tick &&
          *t.init_output_tick - *t.receipt_tick < delta_ext + delta_dcn) {
        timing_ok = false;
      }
      if (t.tau) {
        taus.insert(*t.tau);
        ++ir.honest_outputs;
        ir.rounds_used = std::max(ir.rounds_used, t.rounds);
      }
      any_abort |= t.aborted;
      if (t.sig_ready_seq && (!first_sig_ready || *t.sig_ready_seq < *first_sig_ready)) {
        first_sig_ready = t.sig_ready_seq;
      }
      if (t.reconstruct_seq && (!t.sig_ready_seq || *t.reconstruct_seq < *t.sig_ready_seq)) {
        report.secrecy = false;
        report.violations.push_back("secrecy: node " + std::to_string(v) +
                                    " reconstructed before holding a signature on " + ir.instance);
      }
    }
    std::sort(ir.receipts.begin(), ir.receipts.end());
    if (inst.max_honest_init_delay > delta_dcn) timing_ok = false;

    for (const auto& [index, seq] : inst.adversary_shares) {
      if (!first_sig_ready || seq < *first_sig_ready) ++ir.adversary_shares_before_sig;
    }
    if (ir.adversary_shares_before_sig > f) {
      report.secrecy = false;
      report.violations.push_back("secrecy: adversary held " +
                                  std::to_string(ir.adversary_shares_before_sig) +
                                  " shares before any honest signature on " + ir.instance);
    }

    ir.agreement = taus.size() <= 1;
    if (!ir.agreement) {
      report.agreement = false;
      report.violations.push_back("agreement: " + std::to_string(taus.size()) +
                                  " distinct honest timestamps for " + ir.instance);
    }
    if (!taus.empty()) ir.tau = *taus.begin();

    bool verified = false;
    std::set<Tick> verified_taus;
    for (const auto& s : inst.submissions) {
      if (!s.verified) continue;
      verified = true;
      verified_taus.insert(s.tau);
      if (s.tx != inst.tx) {
        report.guarantees.integrity = false;
        report.violations.push_back("integrity: submitted transaction differs from the user's for " +
                                    ir.instance);
      }
    }
    if (verified_taus.size() > 1 || (ir.tau && !verified_taus.empty() &&
                                     *verified_taus.begin() != *ir.tau)) {
      report.guarantees.unique_timestamp = false;
      report.violations.push_back("unique timestamp: conflicting verified timestamps for " +
                                  ir.instance);
    }

    if (!observed) {
      ir.liveness = Liveness::kUnobserved;
    } else if (verified) {
      ir.liveness = Liveness::kDelivered;
    } else if (any_abort) {
      ir.liveness = Liveness::kAborted;
    } else {
      ir.liveness = Liveness::kStalled;
    }
    if (ir.honest_user) {
      honest_tx_delivered[ir.tx_index] |= ir.liveness == Liveness::kDelivered;
    }

    ir.sync_window_held = observed && all_received && timing_ok;
    if (observed && ir.tau) {
      ir.achieved_delta = achieved_delta(ir.receipts, n, f, *ir.tau);
      bool fair = ir.achieved_delta && *ir.achieved_delta <= f;
      if (ir.sync_window_held) {
        const auto [lo, hi] = sync_bounds(ir.receipts, n, f);
        ir.sync_bound_ok = lo <= *ir.tau && *ir.tau <= hi;
        fair = fair && *ir.achieved_delta <= (f + 1) / 2 && ir.sync_bound_ok;
      }
      if (!fair) {
        report.guarantees.fair_timestamp = false;
        report.violations.push_back(
            "fair timestamp: tau=" + std::to_string(*ir.tau) + " delta=" +
            (ir.achieved_delta ? std::to_string(*ir.achieved_delta) : std::string("none")) +
            (ir.sync_window_held ? " (synchronous)" : "") + " for " + ir.instance);
      }
    }
    index_of[h] = report.instances.size();
    report.instances.push_back(std::move(ir));
  }

  for (const auto& [tx, delivered] : honest_tx_delivered) {
    if (!delivered) {
      report.guarantees.liveness = false;
      report.violations.push_back("liveness: honest transaction " + std::to_string(tx) +
                                  " never reached the mempool");
    }
  }

  if (block_verdict != 0) {
    report.block_verdict = "REJECT:" + std::to_string(block_verdict);
    report.violations.push_back("block rejected by validator (code " +
                                std::to_string(block_verdict) + ")");
  }

  std::vector<std::pair<std::string, std::vector<Tick>>> ordered, ordered_sync;
  bool all_sync = true;
  for (const auto& [h, tau] : block) {
    auto it = index_of.find(h);
    if (it == index_of.end()) continue;
    const InstanceReport& ir = report.instances[it->second];
    if (ir.liveness == Liveness::kUnobserved) continue;
    ordered.emplace_back(ir.instance, ir.receipts);
    all_sync &= ir.sync_window_held;
  }
  report.order_violations = check_order_fairness(ordered, n, f, f);
  if (all_sync && f > 0) {
    auto tight = check_order_fairness(ordered, n, f, (f + 1) / 2);
    report.order_violations.insert(report.order_violations.end(), tight.begin(), tight.end());
  }
  for (const auto& v : report.order_violations) {
    report.violations.push_back("order fairness: " + v.earlier + " ordered before " + v.later +
                                " at delta=" + std::to_string(v.delta));
  }
  if (report.event_cap_hit) report.violations.push_back("run hit the event cap");
  report.log_digest = log.digest_hex();
  return report;
}

std::string report_json(const FairnessReport& r) {
  nlohmann::ordered_json j;
  j["report_version"] = kReportVersion;
  j["n"] = r.n;
  j["f"] = r.f;
  j["seed"] = r.seed;
  j["log_digest"] = r.log_digest;
  j["agreement"] = r.agreement;
  j["secrecy"] = r.secrecy;
  j["guarantees"] = {{"liveness", r.guarantees.liveness},
                   {"integrity", r.guarantees.integrity},
                   {"unique_timestamp", r.guarantees.unique_timestamp},
                   {"fair_timestamp", r.guarantees.fair_timestamp}};
  j["block_verdict"] = r.block_verdict;
  auto& arr = j["instances"] = nlohmann::ordered_json::array();
  for (const auto& i : r.instances) {
    nlohmann::ordered_json e;
    e["instance"] = i.instance;
    e["tx_index"] = i.tx_index;
    e["attempt"] = i.attempt;
    e["honest_user"] = i.honest_user;
    e["liveness"] = liveness_name(i.liveness);
    e["agreement"] = i.agreement;
    e["tau"] = i.tau ? nlohmann::ordered_json(*i.tau) : nlohmann::ordered_json(nullptr);
    e["honest_outputs"] = i.honest_outputs;
    e["honest_nodes"] = i.honest_nodes;
    e["receipts"] = i.receipts;
    e["achieved_delta"] = i.achieved_delta ? nlohmann::ordered_json(*i.achieved_delta)
                                           : nlohmann::ordered_json(nullptr);
    e["sync_window_held"] = i.sync_window_held;
    e["sync_bound_ok"] = i.sync_bound_ok;
    e["rounds_used"] = i.rounds_used;
    arr.push_back(e);
  }
  auto& ov = j["order_violations"] = nlohmann::ordered_json::array();
  for (const auto& v : r.order_violations) {
    ov.push_back({{"earlier", v.earlier}, {"later", v.later}, {"delta", v.delta}});
  }
  j["event_cap_hit"] = r.event_cap_hit;
  j["violations"] = r.violations;
  return j.dump();
}

std::string report_csv_header() {
  return "scenario,seed,n,f,instance,tx_index,attempt,liveness,agreement,tau,"
         "achieved_delta,sync_window_held,sync_bound_ok,rounds_used,run_violations\n";
}

std::string report_csv_rows(const FairnessReport& r, const std::string& scenario) {
  std::ostringstream out;
  for (const auto& i : r.instances) {
    out << scenario << ',' << r.seed << ',' << r.n << ',' << r.f << ',' << i.instance << ','
        << i.tx_index << ',' << i.attempt << ',' << liveness_name(i.liveness) << ','
        << (i.agreement ? 1 : 0) << ',' << (i.tau ? std::to_string(*i.tau) : "") << ','
        << (i.achieved_delta ? std::to_string(*i.achieved_delta) : "") << ','
        << (i.sync_window_held ? 1 : 0) << ',' << (i.sync_bound_ok ? 1 : 0) << ','
        << i.rounds_used << ',' << r.violations.size() << '\n';
  }
  return out.str();
}

}  // namespace dcn::check
