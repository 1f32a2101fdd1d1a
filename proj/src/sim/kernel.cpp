// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/sim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <set>

#include "dcn/core/rng.hpp"
#include "dcn/crypto/signatures.hpp"
#include "dcn/protocol/messages.hpp"
#include "dcn/protocol/pi_aba.hpp"
#include "dcn/submission/envelope.hpp"
#include "dcn/submission/ledger.hpp"
#include "dcn/submission/node.hpp"

namespace dcn::sim {
namespace {

using crypto::Bytes;
using crypto::InstanceHash;
using protocol::Body;
using protocol::MessagePtr;
using protocol::ProtocolMessage;
using submission::NodeEvent;

std::uint64_t tx_digest(const Bytes& tx) {
  const auto d = crypto::sha256(tx);
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = out << 8 | d[i];
  return out;
}

// local = round(rate * global) + skew
struct Clock {
  double rate = 1.0;
  Tick skew = 0;

  Tick local(Tick t) const {
    if (rate == 1.0) return t + skew;
    return static_cast<Tick>(std::llround(rate * static_cast<double>(t))) + skew;
  }
  // Estimate of the first global tick whose reading reaches `deadline`.
  Tick global_for(Tick deadline) const {
    if (rate == 1.0) return deadline - skew;
    return static_cast<Tick>(
        std::ceil(static_cast<double>(deadline - skew) / rate));
  }
};

EventKind map_kind(NodeEvent::Kind k) {
  switch (k) {
    case NodeEvent::Kind::kReceipt: return EventKind::kReceipt;
    case NodeEvent::Kind::kBadUserMessage: return EventKind::kBadUserMessage;
    case NodeEvent::Kind::kInitOutput: return EventKind::kInitOutput;
    case NodeEvent::Kind::kAaOutput: return EventKind::kAaOutput;
    case NodeEvent::Kind::kAbaDecide: return EventKind::kAbaDecide;
    case NodeEvent::Kind::kTaOutput: return EventKind::kTaOutput;
    case NodeEvent::Kind::kPartialRejected: return EventKind::kPartialRejected;
    case NodeEvent::Kind::kSigReady: return EventKind::kSigReady;
    case NodeEvent::Kind::kShareAccepted: return EventKind::kShareAccepted;
    case NodeEvent::Kind::kReconstruct: return EventKind::kReconstruct;
    case NodeEvent::Kind::kAbort: return EventKind::kAbort;
  }
  return EventKind::kRunEnd;
}

class Kernel {
 public:
  Kernel(const ScenarioConfig& config, KernelLimits limits);
  EventLog run();

 private:
  enum class Type { kDeliver, kTimer, kUserSend, kResubmit, kCorrupt };

  struct Event {
    Tick at = 0;
    std::uint64_t seq = 0;
    Type type = Type::kDeliver;
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    MessagePtr msg;
    Tick sent = 0;
    InstanceHash h;
    Tick deadline = 0;
    std::size_t tx_index = 0;
    std::int64_t attempt = 0;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  void push(Event e);
  void record(EventRecord r);
  void record_at(NodeId node, EventKind kind, const InstanceHash& h,
                 std::int64_t a = 0, std::int64_t b = 0, NodeId peer = kNoNode);
  Tick local_of(NodeId node) const {
    return node == kNoNode ? now_ : clocks_[node].local(now_);
  }

  void corrupt(NodeId v);
  void user_send(std::size_t tx_index, std::int64_t attempt);
  void deliver(const Event& e);
  void fire_timer(const Event& e);
  void apply(NodeId node, submission::Effects& fx);
  void send(NodeId from, NodeId to, const MessagePtr& msg);
  void schedule_delivery(NodeId from, NodeId to, const MessagePtr& msg, Tick delay);
  std::vector<Body> adversary_transform(NodeId from, NodeId to,
                                        const ProtocolMessage& msg);
  void forge_submission(NodeId node, const submission::MempoolEntry& real);
  Tick node_delay(NodeId from, NodeId to, const ProtocolMessage& msg);
  Tick user_delay(NodeId to);
  bool targeted(NodeId from, const ProtocolMessage& msg) const;
  void finish();

  ScenarioConfig cfg_;
  KernelLimits limits_;
  Rng sched_rng_;
  Rng user_rng_;
  Rng adv_rng_;
  std::shared_ptr<const crypto::KeyRegistry> registry_;
  std::shared_ptr<const crypto::ThresholdScheme> scheme_;
  std::vector<Clock> clocks_;  // index 0 unused
  std::vector<std::unique_ptr<submission::ClockNode>> nodes_;
  std::vector<bool> corrupted_;
  std::size_t corruptions_ = 0;
  submission::Mempool mempool_;
  std::vector<Bytes> txs_;
  std::map<InstanceHash, std::set<NodeId>> targets_;
  std::set<std::pair<NodeId, InstanceHash>> forged_once_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  Tick now_ = 0;
  EventLog log_;
  bool cap_hit_ = false;
  std::uint64_t processed_ = 0;
};

Kernel::Kernel(const ScenarioConfig& config, KernelLimits limits)
    : cfg_(resolve(config)),
      limits_(limits),
      sched_rng_(0),
      user_rng_(0),
      adv_rng_(0),
      mempool_(nullptr) {
  Rng master(cfg_.seed);
  Rng clock_rng = master.fork(1);
  sched_rng_ = master.fork(2);
  user_rng_ = master.fork(3);
  adv_rng_ = master.fork(4);
  const std::uint64_t key_seed = master.next();
  const std::uint64_t coin_seed = master.next();

  const GroupParams group = cfg_.group();
  registry_ = std::make_shared<crypto::KeyRegistry>(group, key_seed);
  scheme_ = std::make_shared<crypto::IdealThresholdScheme>(registry_);
  mempool_ = submission::Mempool(scheme_);
  auto coin = std::make_shared<protocol::IdealCoin>(coin_seed);

  protocol::TaParams ta;
  ta.group = group;
  ta.sync = protocol::SynchronyParams{cfg_.delta_ext, cfg_.delta_dcn, cfg_.clock.theta};
  ta.epsilon_num = cfg_.epsilon_num;
  ta.epsilon_den = cfg_.epsilon_den;
  const submission::NodeConfig node_config{ta, cfg_.user.nonce_bytes};

  clocks_.resize(cfg_.n + 1);
  nodes_.resize(cfg_.n + 1);
  corrupted_.assign(cfg_.n + 1, false);
  for (NodeId v = 1; v <= cfg_.n; ++v) {
    Clock& c = clocks_[v];
    c.skew = clock_rng.uniform(-cfg_.clock.skew, cfg_.clock.skew);
    if (cfg_.clock.theta > 1.0) {
      const double lo = 1.0 / cfg_.clock.theta, hi = cfg_.clock.theta;
      c.rate = lo + (hi - lo) * clock_rng.unit();
    }
    nodes_[v] = std::make_unique<submission::ClockNode>(
        v, node_config, registry_, scheme_, registry_->node_key(v), coin);
  }
}

void Kernel::push(Event e) {
  e.seq = next_seq_++;
  queue_.push(std::move(e));
}

void Kernel::record(EventRecord r) {
  r.tick = now_;
  log_.append(r);
}

void Kernel::record_at(NodeId node, EventKind kind, const InstanceHash& h,
                       std::int64_t a, std::int64_t b, NodeId peer) {
  EventRecord r;
  r.local_tick = local_of(node);
  r.node = node;
  r.kind = kind;
  r.instance = h;
  r.a = a;
  r.b = b;
  r.peer = peer;
  record(r);
}

EventLog Kernel::run() {
  {
    EventRecord start;
    start.kind = EventKind::kRunStart;
    start.a = static_cast<std::int64_t>(cfg_.seed);
    const std::string config_json = to_json(cfg_);
    start.digest = tx_digest(Bytes(config_json.begin(), config_json.end()));
    record(start);
    EventRecord params;
    params.kind = EventKind::kParams;
    params.a = static_cast<std::int64_t>(cfg_.n);
    params.b = static_cast<std::int64_t>(cfg_.f);
    params.c = cfg_.delta_ext;
    params.d = cfg_.delta_dcn;
    record(params);
  }
  const auto& corrupted = *cfg_.adversary.corrupted;
  for (NodeId v : corrupted) {
    if (cfg_.adversary.corrupt_at && *cfg_.adversary.corrupt_at > 0) {
      Event e;
      e.at = *cfg_.adversary.corrupt_at;
      e.type = Type::kCorrupt;
      e.to = v;
      push(e);
    } else {
      corrupt(v);
    }
  }
  if (cfg_.user.model == UserModel::kWithholding && cfg_.user.withhold.empty()) {
    // Enough silent recipients that no quorum of inputs can form.
    for (std::size_t v = cfg_.n - cfg_.f; v <= cfg_.n; ++v) {
      cfg_.user.withhold.push_back(static_cast<NodeId>(v));
    }
  }
  for (std::size_t k = 0; k < cfg_.user.transactions; ++k) {
    Bytes tx(cfg_.user.tx_size);
    for (auto& b : tx) b = user_rng_.byte();
    txs_.push_back(std::move(tx));
    Event e;
    e.at = static_cast<Tick>(k) * cfg_.user.spacing;
    e.type = Type::kUserSend;
    e.tx_index = k;
    push(e);
  }

  while (!queue_.empty()) {
    if (processed_ >= limits_.max_events) {
      cap_hit_ = true;
      break;
    }
    Event e = queue_.top();
    queue_.pop();
    now_ = e.at;
    ++processed_;
    switch (e.type) {
      case Type::kDeliver: deliver(e); break;
      case Type::kTimer: fire_timer(e); break;
      case Type::kUserSend: user_send(e.tx_index, e.attempt); break;
      case Type::kResubmit: {
        bool landed = false;
        for (const auto& rec : mempool_.records()) {
          if (rec.valid && rec.entry.tx == txs_[e.tx_index]) landed = true;
        }
        if (!landed) user_send(e.tx_index, e.attempt);
        break;
      }
      case Type::kCorrupt: corrupt(e.to); break;
    }
  }
  finish();
  return std::move(log_);
}

void Kernel::corrupt(NodeId v) {
  if (corrupted_[v]) return;
  if (corruptions_ + 1 > cfg_.f) {
    throw ConfigError("adversary.corrupted", "corruption budget f exceeded");
  }
  corrupted_[v] = true;
  ++corruptions_;
  record_at(v, EventKind::kCorrupt, InstanceHash{});
}

void Kernel::user_send(std::size_t tx_index, std::int64_t attempt) {
  const GroupParams group = cfg_.group();
  const auto key = registry_->user_key(1);
  submission::TxEnvelope env =
      cfg_.user.model == UserModel::kContradictoryShares
          ? submission::user_create_contradictory_envelope(
                txs_[tx_index], group, key, user_rng_,
                static_cast<NodeId>(cfg_.f + 1), cfg_.user.nonce_bytes)
          : submission::user_create_envelope(txs_[tx_index], group, key,
                                             user_rng_, cfg_.user.nonce_bytes);
  EventRecord create;
  create.kind = EventKind::kUserCreate;
  create.local_tick = now_;
  create.instance = env.h;
  create.a = static_cast<std::int64_t>(tx_index);
  create.b = attempt;
  create.c = cfg_.user.model == UserModel::kHonest ? 1 : 0;
  create.digest = tx_digest(txs_[tx_index]);
  record(create);

  std::vector<std::pair<Tick, NodeId>> planned;
  for (NodeId v = 1; v <= cfg_.n; ++v) {
    if (cfg_.user.model == UserModel::kWithholding &&
        std::find(cfg_.user.withhold.begin(), cfg_.user.withhold.end(), v) !=
            cfg_.user.withhold.end()) {
      continue;
    }
    const Tick delay = user_delay(v);
    planned.emplace_back(now_ + delay, v);
    auto msg = std::make_shared<const ProtocolMessage>(
        ProtocolMessage{env.h, protocol::UserSubmit{env.shares[v - 1]}});
    schedule_delivery(kNoNode, v, msg, delay);
  }

  const auto target = cfg_.scheduler.target;
  if (cfg_.scheduler.kind == SchedulerKind::kAsyncAdversarial &&
      (target == DelayTarget::kInitFromLowestF ||
       target == DelayTarget::kInitFromHighestF)) {
    std::vector<std::pair<Tick, NodeId>> honest;
    for (const auto& p : planned) {
      if (!corrupted_[p.second]) honest.push_back(p);
    }
    std::sort(honest.begin(), honest.end());
    if (target == DelayTarget::kInitFromHighestF) {
      std::reverse(honest.begin(), honest.end());
    }
    auto& set = targets_[env.h];
    for (std::size_t i = 0; i < honest.size() && i < cfg_.f; ++i) {
      set.insert(honest[i].second);
    }
  }

  if (cfg_.user.resubmit_after && attempt == 0) {
    Event e;
    e.at = now_ + *cfg_.user.resubmit_after;
    e.type = Type::kResubmit;
    e.tx_index = tx_index;
    e.attempt = attempt + 1;
    push(e);
  }
}

Tick Kernel::user_delay(NodeId to) {
  if (!cfg_.user.receipt_offsets.empty()) return cfg_.user.receipt_offsets[to - 1];
  const auto& s = cfg_.scheduler;
  const bool sync = s.kind == SchedulerKind::kSynchronous ||
                    s.kind == SchedulerKind::kAsyncAdversarial ||
                    (s.kind == SchedulerKind::kSyncWindow && now_ < s.window);
  if (sync) return sched_rng_.uniform(0, cfg_.delta_ext);
  return sched_rng_.uniform(0, s.max_ext_delay.value_or(s.max_delay));
}

bool Kernel::targeted(NodeId from, const ProtocolMessage& msg) const {
  const auto& s = cfg_.scheduler;
  if (s.kind != SchedulerKind::kAsyncAdversarial || corrupted_[from]) return false;
  switch (s.target) {
    case DelayTarget::kNone:
      return false;
    case DelayTarget::kKind:
      return protocol::kind_name(msg.body) == s.target_kind;
    case DelayTarget::kInitFromLowestF:
    case DelayTarget::kInitFromHighestF: {
      if (!std::holds_alternative<protocol::InitTs>(msg.body)) return false;
      auto it = targets_.find(msg.instance);
      return it != targets_.end() && it->second.count(from) > 0;
    }
  }
  return false;
}

Tick Kernel::node_delay(NodeId from, NodeId to, const ProtocolMessage& msg) {
  const auto& s = cfg_.scheduler;
  if (targeted(from, msg)) return s.big_delay;
  if (from == to) return 0;
  switch (s.kind) {
    case SchedulerKind::kSynchronous:
    case SchedulerKind::kAsyncAdversarial:
      return sched_rng_.uniform(1, cfg_.delta_dcn);
    case SchedulerKind::kAsyncRandom:
      return sched_rng_.uniform(1, s.max_delay);
    case SchedulerKind::kSyncWindow:
      return now_ < s.window ? sched_rng_.uniform(1, cfg_.delta_dcn)
                             : sched_rng_.uniform(1, s.max_delay);
  }
  return 1;
}

void Kernel::schedule_delivery(NodeId from, NodeId to, const MessagePtr& msg,
                               Tick delay) {
  Event e;
  // Past the horizon every queued message is flushed promptly.
  e.at = delay == 0 ? now_ : std::min(now_ + delay, std::max(cfg_.horizon, now_ + 1));
  e.type = Type::kDeliver;
  e.from = from;
  e.to = to;
  e.msg = msg;
  e.sent = now_;
  push(std::move(e));
}

void Kernel::send(NodeId from, NodeId to, const MessagePtr& msg) {
  if (!corrupted_[from]) {
    schedule_delivery(from, to, msg, node_delay(from, to, *msg));
    return;
  }
  for (auto& body : adversary_transform(from, to, *msg)) {
    auto out = std::make_shared<const ProtocolMessage>(
        ProtocolMessage{msg->instance, std::move(body)});
    schedule_delivery(from, to, out, node_delay(from, to, *out));
  }
}

std::vector<Body> Kernel::adversary_transform(NodeId from, NodeId to,
                                              const ProtocolMessage& msg) {
  const auto& adv = cfg_.adversary;
  std::vector<Body> out;
  const int parity = to % 2 == 1 ? 1 : -1;
  switch (adv.strategy) {
    case Strategy::kCrash:
    case Strategy::kScenarioA:
      return out;
    case Strategy::kWithholdShares:
      if (std::holds_alternative<protocol::ShareReveal>(msg.body)) return out;
      break;
    case Strategy::kEquivocateInit: {
      Body b = msg.body;
      if (auto* m = std::get_if<protocol::InitTs>(&b)) {
        m->timestamp += parity * adv.magnitude;
      } else if (auto* m = std::get_if<protocol::AbaBval>(&b)) {
        m->bit = static_cast<std::uint8_t>(to & 1);
      } else if (auto* m = std::get_if<protocol::AbaAux>(&b)) {
        m->bit = static_cast<std::uint8_t>(to & 1);
      } else if (auto* m = std::get_if<protocol::AbaTerm>(&b)) {
        m->bit = static_cast<std::uint8_t>(to & 1);
      } else if (auto* m = std::get_if<protocol::AaRbc>(&b)) {
        if (m->phase == protocol::AaRbc::Phase::kSend) {
          m->value = m->value + Dyadic::from_int(parity);
        }
      }
      out.push_back(std::move(b));
      return out;
    }
    case Strategy::kExtremeTimestamps: {
      Body b = msg.body;
      if (auto* m = std::get_if<protocol::InitTs>(&b)) {
        m->timestamp += adv.sign * adv.magnitude;
      }
      out.push_back(std::move(b));
      return out;
    }
    case Strategy::kForgePartials: {
      const auto* p = std::get_if<protocol::SigPartial>(&msg.body);
      if (!p) break;
      const Tick fake = p->tau + 1;
      const Bytes stamp = submission::stamp_message(msg.instance, fake);
      out.push_back(protocol::SigPartial{
          fake, scheme_->sign_partial(registry_->node_key(from), stamp)});
      // Partials claiming to come from honest signers.
      std::size_t forged = 0;
      for (NodeId v = 1; v <= cfg_.n && forged < cfg_.f; ++v) {
        if (corrupted_[v]) continue;
        Bytes proof(32);
        for (auto& byte : proof) byte = adv_rng_.byte();
        out.push_back(protocol::SigPartial{fake, {v, stamp, proof}});
        ++forged;
      }
      return out;
    }
    default:
      break;
  }
  out.push_back(msg.body);
  return out;
}

void Kernel::forge_submission(NodeId node, const submission::MempoolEntry& real) {
  if (!forged_once_.insert({node, real.h}).second) return;
  const Tick fake = real.tau + 1;
  const Bytes stamp = submission::stamp_message(real.h, fake);
  std::vector<crypto::PartialSignature> partials;
  partials.push_back(scheme_->sign_partial(registry_->node_key(node), stamp));
  crypto::Encoder agg("");
  agg.u32(node).raw(partials.front().proof);
  for (NodeId v = 1; v <= cfg_.n && partials.size() < cfg_.f + 1; ++v) {
    if (corrupted_[v]) continue;
    Bytes proof(32);
    for (auto& byte : proof) byte = adv_rng_.byte();
    partials.push_back({v, stamp, proof});
    agg.u32(v).raw(proof);
  }
  crypto::ThresholdSignature sig;
  try {
    sig = scheme_->combine(partials);
  } catch (const std::exception&) {
    sig = crypto::ThresholdSignature{stamp, agg.take(), partials.size()};
  }
  submission::MempoolEntry entry{real.tx, real.nonce, real.h, fake, sig, node};
  const auto& rec = mempool_.submit(std::move(entry), now_);
  EventRecord r;
  r.local_tick = now_;
  r.kind = EventKind::kMempoolSubmit;
  r.instance = rec.entry.h;
  r.peer = node;
  r.a = rec.entry.tau;
  r.b = rec.valid ? 1 : 0;
  r.c = rec.duplicate ? 1 : 0;
  r.digest = tx_digest(rec.entry.tx);
  record(r);
}

void Kernel::deliver(const Event& e) {
  const ProtocolMessage& msg = *e.msg;
  EventRecord r;
  r.local_tick = local_of(e.to);
  r.node = e.to;
  r.kind = EventKind::kDeliver;
  r.instance = msg.instance;
  r.peer = e.from;
  r.a = e.sent;
  r.b = static_cast<std::int64_t>(msg.body.index());
  r.c = protocol::message_value(msg.body);
  r.digest = protocol::message_digest(msg);
  record(r);
  submission::Effects fx;
  nodes_[e.to]->on_message(e.from, msg, r.local_tick, fx);
  apply(e.to, fx);
}

void Kernel::fire_timer(const Event& e) {
  const Tick local = local_of(e.to);
  if (local < e.deadline) {
    Event again = e;
    again.at = std::max(now_ + 1, clocks_[e.to].global_for(e.deadline));
    push(again);
    return;
  }
  submission::Effects fx;
  nodes_[e.to]->on_timer(e.h, local, fx);
  apply(e.to, fx);
}

void Kernel::apply(NodeId node, submission::Effects& fx) {
  for (const auto& ev : fx.events) {
    record_at(node, map_kind(ev.kind), ev.h, ev.a, ev.b, ev.peer);
  }
  for (const auto& [h, deadline] : fx.timers) {
    Event t;
    t.type = Type::kTimer;
    t.to = node;
    t.h = h;
    t.deadline = deadline;
    t.at = std::max(now_, clocks_[node].global_for(deadline));
    push(t);
  }
  for (auto& body : fx.broadcasts) {
    auto msg = std::make_shared<const ProtocolMessage>(std::move(body));
    for (NodeId to = 1; to <= cfg_.n; ++to) send(node, to, msg);
  }
  for (auto& entry : fx.submissions) {
    const bool forge =
        corrupted_[node] && cfg_.adversary.strategy == Strategy::kForgePartials;
    if (forge) forge_submission(node, entry);
    if (corrupted_[node] && (cfg_.adversary.strategy == Strategy::kCrash ||
                             cfg_.adversary.strategy == Strategy::kScenarioA)) {
      continue;
    }
    const auto& rec = mempool_.submit(std::move(entry), now_);
    EventRecord r;
    r.local_tick = now_;
    r.kind = EventKind::kMempoolSubmit;
    r.instance = rec.entry.h;
    r.peer = node;
    r.a = rec.entry.tau;
    r.b = rec.valid ? 1 : 0;
    r.c = rec.duplicate ? 1 : 0;
    r.digest = tx_digest(rec.entry.tx);
    record(r);
  }
}

void Kernel::finish() {
  const Tick prev = std::numeric_limits<Tick>::min();
  const submission::Block block = mempool_.build_block(prev);
  for (std::size_t i = 0; i < block.entries.size(); ++i) {
    const auto& e = block.entries[i];
    EventRecord r;
    r.local_tick = now_;
    r.kind = EventKind::kBlockEntry;
    r.instance = e.h;
    r.a = static_cast<std::int64_t>(i);
    r.b = e.tau;
    r.digest = tx_digest(e.tx);
    record(r);
  }
  const auto check = submission::validator_check_block(block, prev, *scheme_);
  EventRecord verdict;
  verdict.local_tick = now_;
  verdict.kind = EventKind::kBlockCheck;
  verdict.a = static_cast<std::int64_t>(check.verdict);
  verdict.b = static_cast<std::int64_t>(check.index);
  verdict.c = static_cast<std::int64_t>(block.entries.size());
  record(verdict);
  EventRecord end;
  end.local_tick = now_;
  end.kind = EventKind::kRunEnd;
  end.a = static_cast<std::int64_t>(processed_);
  end.b = cap_hit_ ? 1 : 0;
  record(end);
}

}  // namespace

EventLog simulate(const ScenarioConfig& config, KernelLimits limits) {
  Kernel kernel(config, limits);
  return kernel.run();
}

RunResult run_scenario(const ScenarioConfig& config, KernelLimits limits) {
  RunResult result;
  result.config = resolve(config);
  result.log = simulate(result.config, limits);
  result.report = check::analyze(result.log);
  return result;
}

}  // namespace dcn::sim
