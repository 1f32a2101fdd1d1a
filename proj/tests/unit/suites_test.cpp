// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/suites/suites.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace dcn::suites {
namespace {

TEST(AaLogBound, ExactCeilings) {
  // eps = 49/100: spread 1 needs ceil(log2(1/0.49)) = 2 halvings.
  EXPECT_EQ(aa_log_bound(1, 49, 100), 2u);
  EXPECT_EQ(aa_log_bound(0, 49, 100), 2u);
  EXPECT_EQ(aa_log_bound(2, 1, 2), 2u);   // 4 exactly
  EXPECT_EQ(aa_log_bound(3, 1, 2), 3u);   // 6 -> 8
  EXPECT_EQ(aa_log_bound(16384, 49, 100), 16u);
  for (std::int64_t s = 1; s <= 1 << 14; s *= 3) {
    const double exact = std::ceil(std::log2(static_cast<double>(s) / 0.49));
    EXPECT_EQ(aa_log_bound(s, 49, 100), static_cast<std::uint32_t>(exact)) << s;
  }
}

TEST(FitLog2, RecoversAnExactLine) {
  std::vector<ComplexityPoint> pts;
  for (std::int64_t s : {1, 2, 4, 8, 16, 32}) {
    ComplexityPoint p;
    p.spread = s;
    p.mean_rounds = 3.0 + 1.5 * std::log2(2.0 + static_cast<double>(s));
    pts.push_back(p);
  }
  const auto fit = fit_log2(pts, 2.0);
  EXPECT_NEAR(fit.slope, 1.5, 1e-9);
  EXPECT_NEAR(fit.intercept, 3.0, 1e-9);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(Matrix, SuitesAreKnownAndSized) {
  EXPECT_EQ(suite_names().size(), 7u);
  EXPECT_TRUE(is_matrix_suite("theorem1"));
  EXPECT_FALSE(is_matrix_suite("crypto-properties"));
  const auto t1 = matrix_scenarios("theorem1", 2);
  // Per n: 8 variants x 4 schedulers, 4 named scenarios, 4 adaptive,
  // 4 user models, 2 drifting clocks.
  EXPECT_EQ(t1.size(), 3u * 46u * 2u);
  std::set<std::string> labels;
  for (const auto& s : t1) labels.insert(s.label);
  EXPECT_EQ(labels.size(), 3u * 46u);
  EXPECT_THROW(matrix_scenarios("crypto-properties", 1), ConfigError);
}

TEST(Matrix, AsyncSuiteKeepsOnlyAsynchronousSchedulers) {
  for (const auto& s : matrix_scenarios("median-validity-async", 1)) {
    const auto k = sim::resolve(s.config).scheduler.kind;
    EXPECT_TRUE(k == sim::SchedulerKind::kAsyncRandom ||
                k == sim::SchedulerKind::kAsyncAdversarial)
        << s.label;
  }
}

TEST(Matrix, RunAllPreservesOrder) {
  auto scen = matrix_scenarios("async-lower-bound", 1);
  scen.resize(12);
  std::vector<std::string> seen;
  const auto out = run_all(scen, 3, [&](const RunOutcome& o) { seen.push_back(o.label); });
  ASSERT_EQ(out.size(), scen.size());
  for (std::size_t i = 0; i < scen.size(); ++i) {
    EXPECT_EQ(out[i].label, scen[i].label);
    EXPECT_EQ(seen[i], scen[i].label);
    EXPECT_TRUE(out[i].error.empty()) << out[i].error;
  }
}

TEST(Matrix, SmallMainMatrixSliceIsClean) {
  auto scen = matrix_scenarios("theorem1", 1);
  const auto out = run_all(scen, 2);
  const auto summary = summarize_matrix("theorem1", out);
  EXPECT_TRUE(summary.passed) << (summary.failures.empty() ? "" : summary.failures[0]);
  EXPECT_EQ(summary.violations, 0u);
  EXPECT_GT(summary.metrics.at("delivered"), 0);
}

TEST(Properties, AbaDecidesQuickly) {
  const auto st = aba_expected_rounds(400, 9);
  EXPECT_EQ(st.runs, 400u);
  EXPECT_EQ(st.disagreements, 0u);
  EXPECT_EQ(st.undecided, 0u);
  EXPECT_EQ(st.validity_failures, 0u);
  EXPECT_LE(st.mean_phases, 4.0);
}

TEST(Properties, AaContractOnSmallSpreads) {
  const auto st = aa_contract({1, 2, 7, 64, 1000}, 6, 4);
  EXPECT_EQ(st.runs, 5u * 6u * 3u);  // spreads x seeds x {4, 7, 10}
  EXPECT_EQ(st.gap_failures, 0u);
  EXPECT_EQ(st.containment_failures, 0u);
  EXPECT_EQ(st.missing_outputs, 0u);
  EXPECT_EQ(st.round_bound_failures, 0u);
  EXPECT_LE(st.max_excess, kAaRoundSlack);
}

TEST(Properties, CryptoSmallRun) {
  const auto st = crypto_properties(2, 2000, 5000);
  EXPECT_GT(st.shamir_subsets, 1000u);
  EXPECT_EQ(st.shamir_failures, 0u);
  EXPECT_EQ(st.forgeries, 0u);
  EXPECT_EQ(st.fuzz_operations, 5000u);
  EXPECT_FALSE(st.chi_square_p.empty());
}

TEST(Properties, RoundsGrowWithSpread) {
  const auto pts = rounds_complexity({1, 1024}, 3, 1, true);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT(pts[0].mean_rounds, pts[1].mean_rounds);
  EXPECT_EQ(pts[0].delivered, pts[0].runs);
  EXPECT_EQ(pts[1].delivered, pts[1].runs);
}

}  // namespace
}  // namespace dcn::suites
