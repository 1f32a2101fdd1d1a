// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcn/core/types.hpp"

namespace dcn::sim {

inline constexpr int kSchemaVersion = 1;

enum class SchedulerKind { kSynchronous, kAsyncRandom, kAsyncAdversarial, kSyncWindow };

/// Which honest messages the adversarial scheduler holds back.
enum class DelayTarget {
  kNone,
  kInitFromLowestF,   // INIT_TS sent by the f honest nodes with earliest receipt
  kInitFromHighestF,  // ... with the latest receipt
  kKind,              // every honest message of `target_kind`
};

struct SchedulerConfig {
  SchedulerKind kind = SchedulerKind::kSynchronous;
  // Node-to-node delay cap in asynchronous phases.
  Tick max_delay = 100;
  // User-to-node delay cap in asynchronous phases (defaults to max_delay).
  std::optional<Tick> max_ext_delay;
  // Length of the synchronous prefix for kSyncWindow.
  Tick window = 0;
  DelayTarget target = DelayTarget::kNone;
  std::string target_kind;  // protocol kind name for kKind
  Tick big_delay = 5000;
};

struct ClockConfig {
  Tick skew = 0;       // per-node offset drawn from [-skew, skew]
  double theta = 1.0;  // per-node rate drawn from [1/theta, theta]
};

enum class Strategy {
  kNone,
  kCrash,
  kHonest,  // corrupted but following the protocol
  kEquivocateInit,
  kExtremeTimestamps,
  kWithholdShares,
  kForgePartials,
  kDelayTargeted,
  kScenarioA,
  kScenarioB,
  kScenarioC,
};

struct AdversaryConfig {
  Strategy strategy = Strategy::kNone;
  // Defaults depend on the strategy; see resolve().
  std::optional<std::vector<NodeId>> corrupted;
  Tick magnitude = 1'000'000;
  int sign = -1;
  // Nodes listed in `corrupted` turn byzantine at this tick instead of 0.
  std::optional<Tick> corrupt_at;
};

enum class UserModel { kHonest, kWithholding, kContradictoryShares };

struct UserConfig {
  UserModel model = UserModel::kHonest;
  std::vector<NodeId> withhold;
  std::size_t transactions = 1;
  Tick spacing = 0;  // ticks between successive transactions
  std::size_t nonce_bytes = 32;
  std::size_t tx_size = 16;
  // Explicit user-to-node delay per node (index v - 1), overriding the
  // scheduler; makes receipt timestamps exact.
  std::vector<Tick> receipt_offsets;
  std::optional<Tick> resubmit_after;
};

struct ScenarioConfig {
  std::string name;
  std::size_t n = 4;
  std::size_t f = 1;
  Tick delta_ext = 10;
  Tick delta_dcn = 10;
  Tick horizon = 1'000'000;
  std::uint64_t seed = 1;
  std::int64_t epsilon_num = 49;
  std::int64_t epsilon_den = 100;
  SchedulerConfig scheduler;
  ClockConfig clock;
  AdversaryConfig adversary;
  UserConfig user;

  GroupParams group() const { return GroupParams{n, f}; }
};

/// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

/// Applies strategy presets (lower-bound scenarios, default corrupted set)
/// and returns a config whose fields fully describe the run.
ScenarioConfig resolve(const ScenarioConfig& config);

ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string to_json(const ScenarioConfig& config);

std::string_view scheduler_name(SchedulerKind k);
std::string_view strategy_name(Strategy s);
std::string_view user_model_name(UserModel m);
std::optional<Strategy> strategy_from_name(std::string_view name);
std::optional<SchedulerKind> scheduler_from_name(std::string_view name);

}  // namespace dcn::sim
