// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/check/fairness.hpp"

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "dcn/core/rng.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/sim/event_log.hpp"

namespace dcn::check {
namespace {

using sim::EventKind;
using sim::EventLog;
using sim::EventRecord;

const std::vector<Tick> kT = {10, 20, 30};

TEST(MedianIndex, CeilOfHalfTheQuorum) {
  EXPECT_EQ(median_index(4, 1), 2u);
  EXPECT_EQ(median_index(7, 2), 3u);
  EXPECT_EQ(median_index(10, 3), 4u);
  EXPECT_EQ(median_index(1, 0), 1u);
}

TEST(MedianValidity, WorkedExample) {
  EXPECT_TRUE(check_median_validity(kT, 4, 1, 20, 0));
  EXPECT_FALSE(check_median_validity(kT, 4, 1, 30, 0));
  EXPECT_TRUE(check_median_validity(kT, 4, 1, 30, 1));
  EXPECT_TRUE(check_median_validity(kT, 4, 1, 25, 1));
  EXPECT_FALSE(check_median_validity(kT, 4, 1, 31, 1));
}

TEST(MedianValidity, ClampsAtTheEnds) {
  EXPECT_EQ(median_bounds(kT, 4, 1, 5), (std::pair<Tick, Tick>{10, 30}));
}

TEST(MedianValidity, UnanimousReceiptsAdmitOnlyThatValue) {
  const std::vector<Tick> same(7, 42);
  for (std::size_t d = 0; d <= 2; ++d) {
    EXPECT_TRUE(check_median_validity(same, 10, 3, 42, d));
    EXPECT_FALSE(check_median_validity(same, 10, 3, 43, d));
  }
  EXPECT_EQ(achieved_delta(same, 10, 3, 42), std::optional<std::size_t>(0));
}

TEST(MedianValidity, ExtraHonestNodesShiftTheLowerIndex) {
  // Four honest receipts at n = 4, f = 1: any three of them could be the
  // quorum, so the guaranteed window starts one place higher.
  const std::vector<Tick> four = {10, 20, 30, 40};
  // Subset medians are 20 and 30, so no single value works at delta 0.
  const auto [lo0, hi0] = median_bounds(four, 4, 1, 0);
  EXPECT_GT(lo0, hi0);
  EXPECT_EQ(median_bounds(four, 4, 1, 1), (std::pair<Tick, Tick>{20, 30}));
  EXPECT_EQ(achieved_delta(four, 4, 1, 25), std::optional<std::size_t>(1));
}

TEST(AchievedDelta, SmallestFittingDelta) {
  EXPECT_EQ(achieved_delta(kT, 4, 1, 20), std::optional<std::size_t>(0));
  EXPECT_EQ(achieved_delta(kT, 4, 1, 10), std::optional<std::size_t>(1));
  EXPECT_EQ(achieved_delta(kT, 4, 1, 9), std::nullopt);
}

TEST(AchievedDelta, MonotoneInDelta) {
  // Property: once tau fits at delta it fits at every larger delta.
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t f = rng.uniform(0, 3);
    const std::size_t n = 3 * f + 1 + rng.uniform(0, 2);
    std::vector<Tick> t(n - f);
    for (auto& x : t) x = rng.uniform(0, 50);
    std::sort(t.begin(), t.end());
    const Tick tau = rng.uniform(-5, 55);
    bool seen = false;
    for (std::size_t d = 0; d <= n - f; ++d) {
      const bool ok = check_median_validity(t, n, f, tau, d);
      if (seen) EXPECT_TRUE(ok);
      seen |= ok;
    }
    EXPECT_EQ(seen, achieved_delta(t, n, f, tau).has_value());
  }
}

TEST(SyncBounds, AsymmetricWindow) {
  // n = 7, f = 2: mu = 3, window [T_2, T_4].
  const std::vector<Tick> t = {1, 2, 3, 4, 5};
  EXPECT_EQ(sync_bounds(t, 7, 2), (std::pair<Tick, Tick>{2, 4}));
  // n = 10, f = 3: mu = 4, window [T_2, T_5].
  const std::vector<Tick> u = {1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(sync_bounds(u, 10, 3), (std::pair<Tick, Tick>{2, 5}));
}

TEST(OrderFairness, FlagsInversionOutsideWindows) {
  const std::vector<std::pair<std::string, std::vector<Tick>>> ordered = {
      {"late", {50, 60, 70}}, {"early", {1, 2, 3}}};
  const auto v = check_order_fairness(ordered, 4, 1, 1);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].earlier, "late");
  EXPECT_EQ(v[0].later, "early");
  EXPECT_TRUE(check_order_fairness({ordered[1], ordered[0]}, 4, 1, 1).empty());
}

TEST(OrderFairness, OverlappingWindowsAreNotViolations) {
  const std::vector<std::pair<std::string, std::vector<Tick>>> ordered = {
      {"a", {10, 20, 30}}, {"b", {5, 15, 25}}};
  EXPECT_TRUE(check_order_fairness(ordered, 4, 1, 1).empty());
  // At delta 0 the windows shrink to 20 and 15, which do invert.
  EXPECT_FALSE(check_order_fairness(ordered, 4, 1, 0).empty());
}

// Hand-built logs for n = 4, f = 1 with node 4 corrupted.
class AnalyzeTest : public ::testing::Test {
 protected:
  AnalyzeTest() {
    h_ = crypto::hash_instance(std::vector<std::uint8_t>{1},
                               std::vector<std::uint8_t>{2});
    add(0, 0, EventKind::kRunStart, 7);
    add(0, 0, EventKind::kParams, 4, 1, 10, 10);
    add(0, 4, EventKind::kCorrupt);
    add(1, 0, EventKind::kUserCreate, 0, 0, 1, 0, kTx);
    add(10, 1, EventKind::kReceipt, 10);
    add(20, 2, EventKind::kReceipt, 20);
    add(30, 3, EventKind::kReceipt, 30);
  }

  void add(Tick tick, NodeId node, EventKind kind, std::int64_t a = 0, std::int64_t b = 0,
           std::int64_t c = 0, std::int64_t d = 0, std::uint64_t digest = 0) {
    EventRecord r;
    r.tick = tick;
    r.local_tick = tick;
    r.node = node;
    r.kind = kind;
    if (kind != EventKind::kRunStart && kind != EventKind::kParams &&
        kind != EventKind::kCorrupt) {
      r.instance = h_;
    }
    r.a = a;
    r.b = b;
    r.c = c;
    r.d = d;
    r.digest = digest;
    log_.append(r);
  }

  void outputs(Tick t1, Tick t2, Tick t3) {
    add(100, 1, EventKind::kTaOutput, t1, 3);
    add(100, 2, EventKind::kTaOutput, t2, 3);
    add(100, 3, EventKind::kTaOutput, t3, 3);
  }

  void submit(Tick tau, std::uint64_t digest = kTx) {
    add(120, 0, EventKind::kMempoolSubmit, tau, 1, 0, 0, digest);
  }

  bool has_violation(const FairnessReport& r, const std::string& prefix) {
    for (const auto& v : r.violations) {
      if (v.rfind(prefix, 0) == 0) return true;
    }
    return false;
  }

  static constexpr std::uint64_t kTx = 0xabcdef;
  crypto::InstanceHash h_;
  EventLog log_;
};

TEST_F(AnalyzeTest, CleanInstance) {
  outputs(20, 20, 20);
  submit(20);
  const auto r = analyze(log_);
  EXPECT_TRUE(r.clean()) << r.violations.front();
  ASSERT_EQ(r.instances.size(), 1u);
  const auto& i = r.instances[0];
  EXPECT_EQ(i.receipts, kT);
  EXPECT_EQ(i.tau, std::optional<Tick>(20));
  EXPECT_EQ(i.achieved_delta, std::optional<std::size_t>(0));
  EXPECT_EQ(i.liveness, Liveness::kDelivered);
  EXPECT_EQ(r.seed, 7u);
}

TEST_F(AnalyzeTest, DisagreementIsReported) {
  outputs(20, 20, 21);
  submit(20);
  const auto r = analyze(log_);
  EXPECT_FALSE(r.agreement);
  EXPECT_TRUE(has_violation(r, "agreement"));
}

TEST_F(AnalyzeTest, TwoVerifiedTimestampsBreakUniqueness) {
  outputs(20, 20, 20);
  submit(20);
  submit(21);
  const auto r = analyze(log_);
  EXPECT_FALSE(r.guarantees.unique_timestamp);
  EXPECT_TRUE(has_violation(r, "unique timestamp"));
}

TEST_F(AnalyzeTest, WrongTransactionBreaksIntegrity) {
  outputs(20, 20, 20);
  submit(20, kTx + 1);
  const auto r = analyze(log_);
  EXPECT_FALSE(r.guarantees.integrity);
  EXPECT_TRUE(has_violation(r, "integrity"));
}

TEST_F(AnalyzeTest, OutputOutsideWindowIsUnfair) {
  outputs(31, 31, 31);
  submit(31);
  const auto r = analyze(log_);
  EXPECT_FALSE(r.guarantees.fair_timestamp);
  EXPECT_TRUE(has_violation(r, "fair timestamp"));
  EXPECT_EQ(r.instances[0].achieved_delta, std::nullopt);
}

TEST_F(AnalyzeTest, MissingSubmissionIsALivenessFailure) {
  outputs(20, 20, 20);
  const auto r = analyze(log_);
  EXPECT_FALSE(r.guarantees.liveness);
  EXPECT_EQ(r.instances[0].liveness, Liveness::kStalled);
}

TEST_F(AnalyzeTest, RevealBeforeSignatureBreaksSecrecy) {
  outputs(20, 20, 20);
  add(101, 1, EventKind::kReconstruct, 20);
  add(102, 1, EventKind::kSigReady, 20);
  submit(20);
  const auto r = analyze(log_);
  EXPECT_FALSE(r.secrecy);
  EXPECT_TRUE(has_violation(r, "secrecy"));
}

TEST_F(AnalyzeTest, UnobservedInstanceIsExcluded) {
  EventLog log;
  EventRecord r;
  r.kind = EventKind::kParams;
  r.a = 4;
  r.b = 1;
  log.append(r);
  r.kind = EventKind::kUserCreate;
  r.instance = h_;
  r.c = 1;
  log.append(r);
  const auto rep = analyze(log);
  ASSERT_EQ(rep.instances.size(), 1u);
  EXPECT_EQ(rep.instances[0].liveness, Liveness::kUnobserved);
}

TEST(ReportFormats, JsonAndCsvCarryTheInstance) {
  FairnessReport r;
  r.n = 4;
  r.f = 1;
  InstanceReport i;
  i.instance = "ab";
  i.tau = 20;
  i.receipts = kT;
  i.achieved_delta = 0;
  r.instances.push_back(i);
  const std::string json = report_json(r);
  EXPECT_NE(json.find("\"report_version\":1"), std::string::npos);
  EXPECT_NE(json.find("\"tau\":20"), std::string::npos);
  const std::string csv = report_csv_rows(r, "demo");
  EXPECT_EQ(csv.rfind("demo,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  const std::string header = report_csv_header();
  EXPECT_EQ(std::count(header.begin(), header.end(), ','),
            std::count(csv.begin(), csv.end(), ','));
}

}  // namespace
}  // namespace dcn::check
