// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "dcn/core/rng.hpp"
#include "dcn/sim/kernel.hpp"
#include "dcn/suites/suites.hpp"

namespace dcn::suites {
namespace {

using sim::ScenarioConfig;
using sim::SchedulerKind;
using sim::Strategy;

constexpr std::size_t kMaxFailuresKept = 20;

ScenarioConfig base(std::size_t n) {
  ScenarioConfig c;
  c.n = n;
  c.f = (n - 1) / 3;
  c.delta_ext = 10;
  c.delta_dcn = 10;
  c.user.transactions = 2;
  c.user.spacing = 5;
  return c;
}

void set_scheduler(ScenarioConfig& c, SchedulerKind kind) {
  c.scheduler.kind = kind;
  if (kind == SchedulerKind::kSyncWindow) c.scheduler.window = 15;
}

std::string label_of(const ScenarioConfig& c, std::string_view variant) {
  std::string out = "n" + std::to_string(c.n) + "/" + std::string(variant);
  return out + "/" + std::string(sim::scheduler_name(c.scheduler.kind));
}

void add_seeds(std::vector<LabeledScenario>& out, const std::string& label,
               ScenarioConfig c, std::size_t seeds) {
  c.name = label;
  for (std::size_t s = 1; s <= seeds; ++s) {
    c.seed = s;
    out.push_back({label, c});
  }
}

struct Variant {
  std::string name;
  Strategy strategy;
  std::int64_t sign = -1;
};

const std::vector<Variant>& strategy_variants() {
  static const std::vector<Variant> v = {
      {"none", Strategy::kNone},
      {"crash", Strategy::kCrash},
      {"honest", Strategy::kHonest},
      {"equivocate_init_timestamps", Strategy::kEquivocateInit},
      {"extreme_low", Strategy::kExtremeTimestamps, -1},
      {"extreme_high", Strategy::kExtremeTimestamps, 1},
      {"withhold_shares", Strategy::kWithholdShares},
      {"forge_partial_attempts", Strategy::kForgePartials},
  };
  return v;
}

constexpr SchedulerKind kAllSchedulers[] = {
    SchedulerKind::kSynchronous, SchedulerKind::kAsyncRandom,
    SchedulerKind::kAsyncAdversarial, SchedulerKind::kSyncWindow};

std::vector<LabeledScenario> main_matrix(std::size_t seeds) {
  std::vector<LabeledScenario> out;
  for (std::size_t n : {4, 7, 10}) {
    for (const auto& v : strategy_variants()) {
      for (auto kind : kAllSchedulers) {
        ScenarioConfig c = base(n);
        c.adversary.strategy = v.strategy;
        c.adversary.sign = static_cast<int>(v.sign);
        set_scheduler(c, kind);
        add_seeds(out, label_of(c, v.name), c, seeds);
      }
    }
    for (auto s : {Strategy::kDelayTargeted, Strategy::kScenarioA,
                   Strategy::kScenarioB, Strategy::kScenarioC}) {
      ScenarioConfig c = sim::resolve([&] {
        ScenarioConfig b = base(n);
        b.adversary.strategy = s;
        return b;
      }());
      add_seeds(out, label_of(c, sim::strategy_name(s)), c, seeds);
    }
    // Adaptive corruption part-way through the first instance.
    for (auto s : {Strategy::kCrash, Strategy::kEquivocateInit}) {
      for (auto kind : {SchedulerKind::kSynchronous, SchedulerKind::kAsyncRandom}) {
        ScenarioConfig c = base(n);
        c.adversary.strategy = s;
        c.adversary.corrupt_at = 12;
        set_scheduler(c, kind);
        add_seeds(out, label_of(c, std::string(sim::strategy_name(s)) + "_adaptive"), c, seeds);
      }
    }
    // Misbehaving users.
    for (auto model : {sim::UserModel::kWithholding, sim::UserModel::kContradictoryShares}) {
      for (auto kind : {SchedulerKind::kSynchronous, SchedulerKind::kAsyncRandom}) {
        ScenarioConfig c = base(n);
        c.adversary.strategy = Strategy::kHonest;
        c.user.model = model;
        set_scheduler(c, kind);
        add_seeds(out, label_of(c, "user_" + std::string(sim::user_model_name(model))), c, seeds);
      }
    }
    // Imperfect clocks.
    {
      ScenarioConfig c = base(n);
      c.adversary.strategy = Strategy::kExtremeTimestamps;
      c.clock.skew = 3;
      c.clock.theta = 1.02;
      add_seeds(out, label_of(c, "extreme_low_drift"), c, seeds);
      c.scheduler.kind = SchedulerKind::kAsyncRandom;
      c.clock.skew = 50;
      add_seeds(out, label_of(c, "extreme_low_drift"), c, seeds);
    }
  }
  return out;
}

std::vector<LabeledScenario> sync_matrix(std::size_t seeds) {
  std::vector<LabeledScenario> out;
  for (std::size_t n : {4, 7, 10}) {
    for (const auto& v : strategy_variants()) {
      ScenarioConfig c = base(n);
      c.adversary.strategy = v.strategy;
      c.adversary.sign = static_cast<int>(v.sign);
      add_seeds(out, label_of(c, v.name), c, seeds);
    }
    // Corrupted nodes follow the protocol but receive first or last.
    for (bool early : {true, false}) {
      const std::string label =
          label_of(base(n), early ? "honest_earliest_receipts" : "honest_latest_receipts");
      for (std::size_t s = 1; s <= seeds; ++s) {
        ScenarioConfig c = base(n);
        c.name = label;
        c.seed = s;
        c.adversary.strategy = Strategy::kHonest;
        Rng rng(s * 7919 + (early ? 1 : 2));
        for (NodeId v = 1; v <= n; ++v) {
          const bool corrupted = v + c.f > n;
          c.user.receipt_offsets.push_back(
              corrupted ? (early ? 0 : c.delta_ext) : rng.uniform(0, c.delta_ext));
        }
        out.push_back({label, c});
      }
    }
    ScenarioConfig c = base(n);
    c.adversary.strategy = Strategy::kExtremeTimestamps;
    c.adversary.sign = 1;
    c.clock.skew = 4;
    c.clock.theta = 1.05;
    add_seeds(out, label_of(c, "extreme_high_drift"), c, seeds);
  }
  return out;
}

// All f-subsets of {1..n}.
std::vector<std::vector<NodeId>> subsets(std::size_t n, std::size_t f) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> cur;
  auto rec = [&](auto&& self, NodeId next) -> void {
    if (cur.size() == f) {
      out.push_back(cur);
      return;
    }
    for (NodeId v = next; v <= n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

std::string ids(const std::vector<NodeId>& v) {
  std::string out;
  for (NodeId id : v) out += (out.empty() ? "" : "-") + std::to_string(id);
  return out;
}

std::vector<LabeledScenario> lower_bound_matrix(std::size_t seeds) {
  seeds = std::min<std::size_t>(seeds, 10);
  std::vector<LabeledScenario> out;
  for (std::size_t n : {4, 7}) {
    for (const auto& corrupted : subsets(n, (n - 1) / 3)) {
      for (int sign : {-1, 1}) {
        ScenarioConfig c = base(n);
        c.user.transactions = 1;
        c.delta_ext = static_cast<Tick>(2 * n + 1);
        c.adversary.strategy = Strategy::kExtremeTimestamps;
        c.adversary.sign = sign;
        c.adversary.corrupted = corrupted;
        for (NodeId v = 1; v <= n; ++v) c.user.receipt_offsets.push_back(2 * v);
        add_seeds(out, "sync/n" + std::to_string(n) + "/extreme_" +
                           (sign < 0 ? "low" : "high") + "/C=" + ids(corrupted),
                  c, seeds);
      }
      for (auto target : {sim::DelayTarget::kInitFromLowestF, sim::DelayTarget::kInitFromHighestF}) {
        ScenarioConfig c = base(n);
        c.user.transactions = 1;
        c.adversary.strategy = Strategy::kDelayTargeted;
        c.adversary.corrupted = corrupted;
        c.scheduler.kind = SchedulerKind::kAsyncAdversarial;
        c.scheduler.target = target;
        for (NodeId v = 1; v <= n; ++v) c.user.receipt_offsets.push_back(v);
        add_seeds(out, "async/n" + std::to_string(n) + "/delay_" +
                           (target == sim::DelayTarget::kInitFromLowestF ? "lowest" : "highest") +
                           "/C=" + ids(corrupted),
                  c, seeds);
      }
    }
    for (auto s : {Strategy::kScenarioA, Strategy::kScenarioB, Strategy::kScenarioC}) {
      ScenarioConfig c = base(n);
      c.user.transactions = 1;
      c.adversary.strategy = s;
      add_seeds(out, "async/n" + std::to_string(n) + "/" + std::string(sim::strategy_name(s)), c,
                seeds);
    }
  }
  return out;
}

void tally(SuiteSummary& s, const RunOutcome& o) {
  ++s.runs;
  if (!o.error.empty()) {
    s.fail(o.label + " seed " + std::to_string(o.config.seed) + ": " + o.error);
    return;
  }
  s.violations += o.report.violations.size();
  for (const auto& v : o.report.violations) {
    s.fail(o.label + " seed " + std::to_string(o.config.seed) + ": " + v);
  }
}

}  // namespace

void SuiteSummary::fail(std::string why) {
  passed = false;
  if (failures.size() < kMaxFailuresKept) failures.push_back(std::move(why));
}

std::string SuiteSummary::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["passed"] = passed;
  j["runs"] = runs;
  j["violations"] = violations;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metrics) j["metrics"][k] = v;
  j["failures"] = failures;
  return j.dump();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "theorem1",          "median-validity-sync", "median-validity-async",
      "async-lower-bound", "aba-expected-rounds",  "crypto-properties",
      "rounds-complexity",
  };
  return names;
}

bool is_matrix_suite(std::string_view name) {
  return name == "theorem1" || name == "median-validity-sync" ||
         name == "median-validity-async" || name == "async-lower-bound";
}

std::vector<LabeledScenario> matrix_scenarios(std::string_view suite, std::size_t seeds) {
  if (suite == "theorem1") return main_matrix(seeds);
  if (suite == "median-validity-sync") return sync_matrix(seeds);
  if (suite == "median-validity-async") {
    std::vector<LabeledScenario> out;
    for (auto& s : main_matrix(seeds)) {
      const auto kind = sim::resolve(s.config).scheduler.kind;
      if (kind == SchedulerKind::kAsyncRandom || kind == SchedulerKind::kAsyncAdversarial) {
        out.push_back(std::move(s));
      }
    }
    return out;
  }
  if (suite == "async-lower-bound") return lower_bound_matrix(seeds);
  throw ConfigError("suite", "'" + std::string(suite) + "' is not a scenario-matrix suite");
}

std::vector<RunOutcome> run_all(const std::vector<LabeledScenario>& scenarios,
                                std::size_t jobs,
                                const std::function<void(const RunOutcome&)>& on_done,
                                bool keep_logs) {
  std::vector<RunOutcome> results(scenarios.size());
  std::vector<char> done(scenarios.size(), 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= scenarios.size()) return;
      RunOutcome o;
      o.label = scenarios[i].label;
      try {
        auto r = sim::run_scenario(scenarios[i].config);
        o.config = std::move(r.config);
        o.report = std::move(r.report);
        if (keep_logs) o.log = std::move(r.log);
      } catch (const std::exception& e) {
        o.config = scenarios[i].config;
        o.error = e.what();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        results[i] = std::move(o);
        done[i] = 1;
      }
      cv.notify_one();
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, scenarios.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  // Stream results in input order as they become available.
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return done[i] != 0; });
    lock.unlock();
    if (on_done) on_done(results[i]);
    if (keep_logs) results[i].log.reset();
  }
  for (auto& t : pool) t.join();
  return results;
}

SuiteSummary summarize_matrix(std::string_view suite, const std::vector<RunOutcome>& outcomes) {
  SuiteSummary s;
  s.suite = std::string(suite);
  std::size_t instances = 0, completed = 0, delivered = 0, stalled = 0, aborted = 0,
              unobserved = 0, sync_held = 0;
  double max_delta = 0;
  for (const auto& o : outcomes) {
    tally(s, o);
    if (!o.error.empty()) continue;
    const std::size_t f = o.report.f;
    for (const auto& i : o.report.instances) {
      ++instances;
      switch (i.liveness) {
        case check::Liveness::kDelivered: ++delivered; break;
        case check::Liveness::kStalled: ++stalled; break;
        case check::Liveness::kAborted: ++aborted; break;
        case check::Liveness::kUnobserved: ++unobserved; break;
      }
      sync_held += i.sync_window_held ? 1 : 0;
      if (!i.tau || i.liveness == check::Liveness::kUnobserved) continue;
      ++completed;
      const std::string where = o.label + " seed " + std::to_string(o.config.seed);
      if (!i.achieved_delta) {
        s.fail(where + ": output outside every median window");
        continue;
      }
      max_delta = std::max(max_delta, static_cast<double>(*i.achieved_delta));
      if (suite == "median-validity-async" && *i.achieved_delta > f) {
        s.fail(where + ": achieved delta " + std::to_string(*i.achieved_delta) + " > f");
      }
      if (suite == "median-validity-sync") {
        if (!i.sync_window_held) s.fail(where + ": synchrony did not hold");
        if (*i.achieved_delta > (f + 1) / 2 || !i.sync_bound_ok) {
          s.fail(where + ": achieved delta " + std::to_string(*i.achieved_delta) +
                 " outside the synchronous window");
        }
      }
    }
  }
  if (suite == "median-validity-sync" && completed != instances) {
    s.fail("synchronous suite left " + std::to_string(instances - completed) +
           " instances without output");
  }
  if (suite == "async-lower-bound") {
    for (std::size_t n : {4, 7}) {
      const std::size_t f = (n - 1) / 3;
      for (bool sync : {true, false}) {
        const std::string prefix = (sync ? "sync/n" : "async/n") + std::to_string(n) + "/";
        double best = -1;
        for (const auto& o : outcomes) {
          if (o.label.rfind(prefix, 0) != 0 || !o.error.empty()) continue;
          for (const auto& i : o.report.instances) {
            if (i.achieved_delta) best = std::max(best, static_cast<double>(*i.achieved_delta));
            if (sync && !i.sync_window_held) {
              s.fail(o.label + " seed " + std::to_string(o.config.seed) +
                     ": synchrony did not hold");
            }
          }
        }
        const double bound = sync ? static_cast<double>((f + 1) / 2) : static_cast<double>(f);
        s.metrics[prefix.substr(0, prefix.size() - 1) + "_max_delta"] = best;
        if (best != bound) {
          s.fail(prefix + ": worst achieved delta " + std::to_string(best) + ", expected exactly " +
                 std::to_string(bound));
        }
      }
    }
  }
  s.metrics["instances"] = static_cast<double>(instances);
  s.metrics["completed"] = static_cast<double>(completed);
  s.metrics["delivered"] = static_cast<double>(delivered);
  s.metrics["stalled"] = static_cast<double>(stalled);
  s.metrics["aborted"] = static_cast<double>(aborted);
  s.metrics["unobserved"] = static_cast<double>(unobserved);
  s.metrics["sync_window_held"] = static_cast<double>(sync_held);
  s.metrics["max_achieved_delta"] = max_delta;
  return s;
}

SuiteSummary run_suite(std::string_view name, std::size_t seeds, std::size_t jobs,
                       const std::function<void(const RunOutcome&)>& on_run) {
  if (is_matrix_suite(name)) {
    auto outcomes = run_all(matrix_scenarios(name, seeds), jobs, on_run);
    return summarize_matrix(name, outcomes);
  }
  SuiteSummary s;
  s.suite = std::string(name);
  if (name == "aba-expected-rounds") {
    const auto st = aba_expected_rounds(std::max<std::size_t>(seeds, 10'000), 1);
    s.runs = st.runs;
    s.metrics["mean_phases"] = st.mean_phases;
    s.metrics["max_phases"] = st.max_phases;
    s.metrics["disagreements"] = static_cast<double>(st.disagreements);
    s.metrics["undecided"] = static_cast<double>(st.undecided);
    s.metrics["validity_failures"] = static_cast<double>(st.validity_failures);
    if (st.mean_phases > 4.0) s.fail("mean phases above 4");
    if (st.max_phases > 20) s.fail("max phases above 20");
    if (st.disagreements || st.undecided || st.validity_failures) {
      s.fail("binary agreement safety or termination failure");
    }
  } else if (name == "crypto-properties") {
    const auto st = crypto_properties(1);
    s.runs = st.shamir_subsets + st.fuzz_operations;
    s.metrics["shamir_subsets"] = static_cast<double>(st.shamir_subsets);
    s.metrics["shamir_failures"] = static_cast<double>(st.shamir_failures);
    s.metrics["chi_square_min_p"] = st.min_p;
    s.metrics["fuzz_operations"] = static_cast<double>(st.fuzz_operations);
    s.metrics["forgeries"] = static_cast<double>(st.forgeries);
    if (st.shamir_failures) s.fail("Shamir round trip failed");
    if (st.min_p <= 0.001) s.fail("share distribution fails the chi-square test");
    if (st.forgeries) s.fail("forged signature verified");
  } else if (name == "rounds-complexity") {
    const auto spreads = default_spreads();
    const std::size_t per = std::max<std::size_t>(seeds, 1);
    for (bool sync : {true, false}) {
      const auto points = rounds_complexity(spreads, per, jobs, sync);
      const auto fit = fit_log2(points, sync ? 2.0 : 0.0);
      const std::string p = sync ? "sync_" : "async_";
      s.metrics[p + "slope"] = fit.slope;
      s.metrics[p + "intercept"] = fit.intercept;
      s.metrics[p + "r2"] = fit.r2;
      for (const auto& pt : points) {
        s.runs += pt.runs;
        s.violations += pt.violations;
        if (pt.delivered != pt.runs) s.fail(p + "spread " + std::to_string(pt.spread) + ": lost transactions");
        if (pt.violations) s.fail(p + "spread " + std::to_string(pt.spread) + ": violations");
      }
      if (fit.r2 < 0.8 || fit.slope <= 0) s.fail(p + "rounds do not track log2(spread)");
    }
    const auto aa = aa_contract(spreads, std::max<std::size_t>(seeds / 4, 4), 1);
    s.metrics["aa_runs"] = static_cast<double>(aa.runs);
    s.metrics["aa_max_excess_rounds"] = aa.max_excess;
    if (aa.gap_failures || aa.containment_failures || aa.round_bound_failures || aa.missing_outputs) {
      s.fail("approximate agreement contract violated");
    }
  } else {
    throw ConfigError("suite", "unknown suite '" + std::string(name) + "'");
  }
  return s;
}

}  // namespace dcn::suites
