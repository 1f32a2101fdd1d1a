// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/sim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dcn::sim {
namespace {

using nlohmann::json;

constexpr Tick kMaxTick = Tick{1} << 39;

template <typename E>
struct NameTable {
  E value;
  std::string_view name;
};

constexpr NameTable<SchedulerKind> kSchedulers[] = {
    {SchedulerKind::kSynchronous, "synchronous"},
    {SchedulerKind::kAsyncRandom, "async_random"},
    {SchedulerKind::kAsyncAdversarial, "async_adversarial"},
    {SchedulerKind::kSyncWindow, "sync_window"},
};

constexpr NameTable<Strategy> kStrategies[] = {
    {Strategy::kNone, "none"},
    {Strategy::kCrash, "crash"},
    {Strategy::kHonest, "honest"},
    {Strategy::kEquivocateInit, "equivocate_init_timestamps"},
    {Strategy::kExtremeTimestamps, "extreme_timestamps"},
    {Strategy::kWithholdShares, "withhold_shares"},
    {Strategy::kForgePartials, "forge_partial_attempts"},
    {Strategy::kDelayTargeted, "delay_targeted"},
    {Strategy::kScenarioA, "scenario_a"},
    {Strategy::kScenarioB, "scenario_b"},
    {Strategy::kScenarioC, "scenario_c"},
};

constexpr NameTable<UserModel> kUserModels[] = {
    {UserModel::kHonest, "honest"},
    {UserModel::kWithholding, "withholding"},
    {UserModel::kContradictoryShares, "contradictory_shares"},
};

constexpr NameTable<DelayTarget> kTargets[] = {
    {DelayTarget::kNone, "none"},
    {DelayTarget::kInitFromLowestF, "init_from_lowest_f"},
    {DelayTarget::kInitFromHighestF, "init_from_highest_f"},
    {DelayTarget::kKind, "kind"},
};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E> (&table)[N], E value) {
  for (const auto& e : table) {
    if (e.value == value) return e.name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E> (&table)[N], std::string_view name) {
  for (const auto& e : table) {
    if (e.name == name) return e.value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string choices(const NameTable<E> (&table)[N]) {
  std::string out;
  for (const auto& e : table) {
    if (!out.empty()) out += ", ";
    out += e.name;
  }
  return out;
}

// Reads fields out of one JSON object, tracking the path for diagnostics
// and rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "$" : path_, "expected an object");
  }

  std::string at(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = obj_.find(std::string(key));
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  template <typename T>
  void integer(std::string_view key, T& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v->get<std::int64_t>() < 0 && !v->is_number_unsigned()) {
          throw ConfigError(at(key), "must be non-negative");
        }
      }
      out = v->get<T>();
    }
  }

  template <typename T>
  void optional_integer(std::string_view key, std::optional<T>& out) {
    if (find(key)) {
      T value{};
      integer(key, value);
      out = value;
    }
  }

  void number(std::string_view key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(at(key), "expected a number");
      out = v->get<double>();
    }
  }

  void string(std::string_view key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <typename E, std::size_t N>
  void enumeration(std::string_view key, const NameTable<E> (&table)[N], E& out) {
    std::string name;
    string(key, name);
    if (name.empty()) return;
    auto v = value_of(table, name);
    if (!v) throw ConfigError(at(key), "unknown value '" + name + "' (expected one of: " + choices(table) + ")");
    out = *v;
  }

  template <typename T>
  void integer_list(std::string_view key, std::vector<T>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(at(key), "expected an array");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number_integer()) {
          throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected an integer");
        }
        out.push_back(e.get<T>());
      }
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

}  // namespace

std::string_view scheduler_name(SchedulerKind k) { return name_of(kSchedulers, k); }
std::string_view strategy_name(Strategy s) { return name_of(kStrategies, s); }
std::string_view user_model_name(UserModel m) { return name_of(kUserModels, m); }
std::optional<Strategy> strategy_from_name(std::string_view name) {
  return value_of(kStrategies, name);
}
std::optional<SchedulerKind> scheduler_from_name(std::string_view name) {
  return value_of(kSchedulers, name);
}

void validate(const ScenarioConfig& c) {
  require(c.n >= 1 && c.n <= kMaxNodes, "n", "must be in 1..255");
  require(c.n > 3 * c.f, "f", "need n > 3f (n=" + std::to_string(c.n) + ", f=" + std::to_string(c.f) + ")");
  require(c.delta_ext > 0 && c.delta_ext <= kMaxTick, "delta_ext", "must be positive");
  require(c.delta_dcn > 0 && c.delta_dcn <= kMaxTick, "delta_dcn", "must be positive");
  require(c.horizon > 0 && c.horizon <= kMaxTick, "horizon", "must be in 1..2^39");
  require(c.epsilon_num > 0 && c.epsilon_den > 0 && 2 * c.epsilon_num < c.epsilon_den,
          "epsilon", "must lie strictly between 0 and 1/2");

  const auto& s = c.scheduler;
  require(s.max_delay >= 1 && s.max_delay <= kMaxTick, "scheduler.max_delay", "must be >= 1");
  require(!s.max_ext_delay || (*s.max_ext_delay >= 0 && *s.max_ext_delay <= kMaxTick),
          "scheduler.max_ext_delay", "must be >= 0");
  require(s.window >= 0 && s.window <= kMaxTick, "scheduler.window", "must be >= 0");
  require(s.big_delay >= 1 && s.big_delay <= kMaxTick, "scheduler.big_delay", "must be >= 1");
  require(s.target != DelayTarget::kKind || !s.target_kind.empty(), "scheduler.target_kind",
          "required when target is 'kind'");

  require(c.clock.skew >= 0 && c.clock.skew <= 1'000'000, "clock.skew", "must be in 0..10^6");
  require(c.clock.theta >= 1.0 && c.clock.theta <= 2.0, "clock.theta", "must be in [1, 2]");

  const auto& a = c.adversary;
  if (a.corrupted) {
    std::set<NodeId> ids;
    for (std::size_t i = 0; i < a.corrupted->size(); ++i) {
      const NodeId id = (*a.corrupted)[i];
      require(id >= 1 && id <= c.n, "adversary.corrupted[" + std::to_string(i) + "]",
              "node id out of range");
      require(ids.insert(id).second, "adversary.corrupted[" + std::to_string(i) + "]",
              "duplicate node id");
    }
    require(ids.size() <= c.f, "adversary.corrupted",
            std::to_string(ids.size()) + " corruptions exceed f=" + std::to_string(c.f));
  }
  require(a.magnitude >= 0 && a.magnitude <= kMaxTick, "adversary.magnitude", "must be in 0..2^39");
  require(a.sign == 1 || a.sign == -1, "adversary.sign", "must be 1 or -1");
  require(!a.corrupt_at || *a.corrupt_at >= 0, "adversary.corrupt_at", "must be >= 0");

  const auto& u = c.user;
  require(u.transactions >= 1 && u.transactions <= 1000, "user.transactions", "must be in 1..1000");
  require(u.spacing >= 0 && u.spacing <= kMaxTick, "user.spacing", "must be >= 0");
  require(u.nonce_bytes >= 1 && u.nonce_bytes <= 1024, "user.nonce_bytes", "must be in 1..1024");
  require(u.tx_size <= 1024, "user.tx_size", "must be at most 1024");
  require(u.receipt_offsets.empty() || u.receipt_offsets.size() == c.n, "user.receipt_offsets",
          "must list one offset per node");
  for (std::size_t i = 0; i < u.receipt_offsets.size(); ++i) {
    require(u.receipt_offsets[i] >= 0 && u.receipt_offsets[i] <= kMaxTick,
            "user.receipt_offsets[" + std::to_string(i) + "]", "must be >= 0");
  }
  for (std::size_t i = 0; i < u.withhold.size(); ++i) {
    require(u.withhold[i] >= 1 && u.withhold[i] <= c.n, "user.withhold[" + std::to_string(i) + "]",
            "node id out of range");
  }
  require(!u.resubmit_after || *u.resubmit_after > 0, "user.resubmit_after", "must be positive");
}

ScenarioConfig resolve(const ScenarioConfig& input) {
  validate(input);
  ScenarioConfig c = input;
  auto range = [](std::size_t lo, std::size_t hi) {
    std::vector<NodeId> ids;
    for (std::size_t v = lo; v <= hi; ++v) ids.push_back(static_cast<NodeId>(v));
    return ids;
  };
  const std::size_t n = c.n, f = c.f;
  auto& adv = c.adversary;
  switch (adv.strategy) {
    case Strategy::kNone:
      if (!adv.corrupted) adv.corrupted = std::vector<NodeId>{};
      break;
    case Strategy::kScenarioA:
      // Lowest ids corrupted and silent; honest node v receives at v.
      adv.corrupted = range(1, f);
      c.user.receipt_offsets.clear();
      for (std::size_t v = 1; v <= n; ++v) c.user.receipt_offsets.push_back(static_cast<Tick>(v));
      c.scheduler.kind = SchedulerKind::kAsyncAdversarial;
      c.scheduler.target = DelayTarget::kNone;
      break;
    case Strategy::kScenarioB:
      // Corrupted nodes take the top inputs and behave; the f honest
      // nodes with the lowest inputs are slow.
      adv.corrupted = range(n - f + 1, n);
      c.user.receipt_offsets.clear();
      for (std::size_t v = 1; v <= n; ++v) c.user.receipt_offsets.push_back(static_cast<Tick>(v));
      c.scheduler.kind = SchedulerKind::kAsyncAdversarial;
      c.scheduler.target = DelayTarget::kInitFromLowestF;
      break;
    case Strategy::kScenarioC:
      // Corrupted nodes take inputs f+1..2f below the honest range
      // 2f+1..n+f; the f honest nodes with the highest inputs are slow.
      adv.corrupted = range(1, f);
      c.user.receipt_offsets.clear();
      for (std::size_t v = 1; v <= n; ++v) c.user.receipt_offsets.push_back(static_cast<Tick>(v + f));
      c.scheduler.kind = SchedulerKind::kAsyncAdversarial;
      c.scheduler.target = DelayTarget::kInitFromHighestF;
      break;
    case Strategy::kDelayTargeted:
      if (!adv.corrupted) adv.corrupted = std::vector<NodeId>{};
      c.scheduler.kind = SchedulerKind::kAsyncAdversarial;
      if (c.scheduler.target == DelayTarget::kNone) c.scheduler.target = DelayTarget::kInitFromLowestF;
      break;
    default:
      if (!adv.corrupted) adv.corrupted = range(n - f + 1, n);
      break;
  }
  validate(c);
  return c;
}

ScenarioConfig parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  ScenarioConfig c;
  Reader root(doc, "");
  int schema = 0;
  if (!root.find("schema")) throw ConfigError("schema", "missing (expected 1)");
  root.integer("schema", schema);
  if (schema != kSchemaVersion) {
    throw ConfigError("schema", "unsupported version " + std::to_string(schema) + " (expected 1)");
  }
  root.string("name", c.name);
  root.integer("n", c.n);
  root.integer("f", c.f);
  root.integer("delta_ext", c.delta_ext);
  root.integer("delta_dcn", c.delta_dcn);
  root.integer("horizon", c.horizon);
  root.integer("seed", c.seed);
  if (const json* eps = root.find("epsilon")) {
    if (!eps->is_array() || eps->size() != 2 || !(*eps)[0].is_number_integer() ||
        !(*eps)[1].is_number_integer()) {
      throw ConfigError("epsilon", "expected [numerator, denominator]");
    }
    c.epsilon_num = (*eps)[0].get<std::int64_t>();
    c.epsilon_den = (*eps)[1].get<std::int64_t>();
  }
  if (const json* s = root.find("scheduler")) {
    Reader r(*s, "scheduler");
    r.enumeration("kind", kSchedulers, c.scheduler.kind);
    r.integer("max_delay", c.scheduler.max_delay);
    r.optional_integer("max_ext_delay", c.scheduler.max_ext_delay);
    r.integer("window", c.scheduler.window);
    r.enumeration("target", kTargets, c.scheduler.target);
    r.string("target_kind", c.scheduler.target_kind);
    r.integer("big_delay", c.scheduler.big_delay);
    r.finish();
  }
  if (const json* s = root.find("clock")) {
    Reader r(*s, "clock");
    r.integer("skew", c.clock.skew);
    r.number("theta", c.clock.theta);
    r.finish();
  }
  if (const json* s = root.find("adversary")) {
    Reader r(*s, "adversary");
    r.enumeration("strategy", kStrategies, c.adversary.strategy);
    if (r.find("corrupted")) {
      std::vector<NodeId> ids;
      r.integer_list("corrupted", ids);
      c.adversary.corrupted = ids;
    }
    r.integer("magnitude", c.adversary.magnitude);
    r.integer("sign", c.adversary.sign);
    r.optional_integer("corrupt_at", c.adversary.corrupt_at);
    r.finish();
  }
  if (const json* s = root.find("user")) {
    Reader r(*s, "user");
    r.enumeration("model", kUserModels, c.user.model);
    r.integer_list("withhold", c.user.withhold);
    r.integer("transactions", c.user.transactions);
    r.integer("spacing", c.user.spacing);
    r.integer("nonce_bytes", c.user.nonce_bytes);
    r.integer("tx_size", c.user.tx_size);
    r.integer_list("receipt_offsets", c.user.receipt_offsets);
    r.optional_integer("resubmit_after", c.user.resubmit_after);
    r.finish();
  }
  root.finish();
  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_json(const ScenarioConfig& c) {
  json doc;
  doc["schema"] = kSchemaVersion;
  if (!c.name.empty()) doc["name"] = c.name;
  doc["n"] = c.n;
  doc["f"] = c.f;
  doc["delta_ext"] = c.delta_ext;
  doc["delta_dcn"] = c.delta_dcn;
  doc["horizon"] = c.horizon;
  doc["seed"] = c.seed;
  doc["epsilon"] = {c.epsilon_num, c.epsilon_den};
  json s;
  s["kind"] = scheduler_name(c.scheduler.kind);
  s["max_delay"] = c.scheduler.max_delay;
  if (c.scheduler.max_ext_delay) s["max_ext_delay"] = *c.scheduler.max_ext_delay;
  s["window"] = c.scheduler.window;
  s["target"] = name_of(kTargets, c.scheduler.target);
  if (!c.scheduler.target_kind.empty()) s["target_kind"] = c.scheduler.target_kind;
  s["big_delay"] = c.scheduler.big_delay;
  doc["scheduler"] = s;
  doc["clock"] = {{"skew", c.clock.skew}, {"theta", c.clock.theta}};
  json a;
  a["strategy"] = strategy_name(c.adversary.strategy);
  if (c.adversary.corrupted) a["corrupted"] = *c.adversary.corrupted;
  a["magnitude"] = c.adversary.magnitude;
  a["sign"] = c.adversary.sign;
  if (c.adversary.corrupt_at) a["corrupt_at"] = *c.adversary.corrupt_at;
  doc["adversary"] = a;
  json u;
  u["model"] = user_model_name(c.user.model);
  u["withhold"] = c.user.withhold;
  u["transactions"] = c.user.transactions;
  u["spacing"] = c.user.spacing;
  u["nonce_bytes"] = c.user.nonce_bytes;
  u["tx_size"] = c.user.tx_size;
  u["receipt_offsets"] = c.user.receipt_offsets;
  if (c.user.resubmit_after) u["resubmit_after"] = *c.user.resubmit_after;
  doc["user"] = u;
  return doc.dump(2);
}

}  // namespace dcn::sim
