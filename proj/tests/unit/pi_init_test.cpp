// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/pi_init.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "dcn/core/rng.hpp"

namespace dcn::protocol {
namespace {

constexpr SynchronyParams kSync{10, 5, 1.0};

PiInit make(std::size_t n, std::size_t f) {
  return PiInit(GroupParams{n, f}, kSync);
}

TEST(PiInit, InputBroadcastsOnce) {
  PiInit init = make(4, 1);
  auto first = init.on_input(100, 0);
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(first->timestamp, 100);
  EXPECT_FALSE(init.on_input(101, 1).has_value());
  EXPECT_EQ(*init.input(), 100);
}

TEST(PiInit, FirstValuePerSenderWins) {
  PiInit init = make(4, 1);
  init.on_receive(3, 50);
  init.on_receive(3, 60);
  EXPECT_EQ(init.received().at(3), 50);
  EXPECT_EQ(init.received_count(), 1u);
}

TEST(PiInit, WaitsForBothConditions) {
  PiInit init = make(4, 1);
  init.on_input(10, 100);
  init.on_receive(1, 10);
  init.on_receive(2, 20);
  EXPECT_FALSE(init.try_output(1000).has_value());  // only 2 < n-f values
  init.on_receive(3, 30);
  EXPECT_EQ(*init.deadline(), 115);
  EXPECT_FALSE(init.try_output(114).has_value());
  EXPECT_EQ(init.try_output(115), 20);
}

TEST(PiInit, OutputIsLatched) {
  PiInit init = make(4, 1);
  init.on_input(10, 0);
  for (NodeId s = 1; s <= 3; ++s) init.on_receive(s, 10 * s);
  EXPECT_EQ(init.try_output(100), 20);
  init.on_receive(4, 0);
  EXPECT_EQ(init.try_output(200), 20);
}

TEST(PiInit, NoInputMeansNoOutput) {
  PiInit init = make(4, 1);
  for (NodeId s = 1; s <= 4; ++s) init.on_receive(s, 7);
  EXPECT_FALSE(init.try_output(1'000'000).has_value());
  EXPECT_FALSE(init.deadline().has_value());
}

TEST(PiInit, IndexFormulaExamples) {
  EXPECT_EQ(init_select({10, 20, 30}, {4, 1}), 20);
  EXPECT_EQ(init_select({10, 20, 30, 40}, {4, 1}), 20);
  EXPECT_EQ(init_select({7, 6, 5, 4, 3, 2, 1}, {7, 2}), 4);
  // n=7, f=2, k=1: index 3 + 0.
  EXPECT_EQ(init_select({1, 2, 3, 4, 5, 6}, {7, 2}), 3);
  EXPECT_THROW(init_select({1, 2}, {4, 1}), ParameterError);
}

TEST(PiInit, ByzantineNegativeValueRecorded) {
  PiInit init = make(4, 1);
  init.on_input(10, 0);
  init.on_receive(4, -1'000'000);
  init.on_receive(1, 10);
  init.on_receive(2, 12);
  EXPECT_EQ(init.try_output(50), 10);
}

TEST(PiInit, SlowClockRateStretchesWait) {
  PiInit init(GroupParams{4, 1}, SynchronyParams{10, 5, 1.1});
  init.on_input(0, 0);
  // ceil(1.1 * 15) plus one tick for rounding of the drifting clock.
  EXPECT_EQ(*init.deadline(), 18);
}

TEST(PiInit, SelectionMonotoneInEachValue) {
  Rng rng(17);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t f = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t n = 3 * f + 1;
    const std::size_t count = static_cast<std::size_t>(
        rng.uniform(static_cast<std::int64_t>(n - f), static_cast<std::int64_t>(n)));
    std::vector<Tick> values(count);
    for (auto& v : values) v = rng.uniform(-50, 50);
    const Tick before = init_select(values, {n, f});
    const std::size_t i = static_cast<std::size_t>(
        rng.uniform(0, static_cast<std::int64_t>(count) - 1));
    values[i] += rng.uniform(0, 30);
    EXPECT_GE(init_select(values, {n, f}), before);
  }
}

TEST(PiInit, OutputWithinHonestRangeWithUpToFByzantine) {
  Rng rng(23);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t f = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t n = 3 * f + 1;
    const std::size_t honest = static_cast<std::size_t>(
        rng.uniform(static_cast<std::int64_t>(n - f), static_cast<std::int64_t>(n)));
    std::vector<Tick> values;
    Tick lo = 1000, hi = -1000;
    for (std::size_t i = 0; i < honest; ++i) {
      values.push_back(rng.uniform(0, 100));
      lo = std::min(lo, values.back());
      hi = std::max(hi, values.back());
    }
    for (std::size_t i = honest; i < n; ++i) {
      values.push_back(rng.coin() ? -1'000'000 : 1'000'000);
    }
    const Tick out = init_select(values, {n, f});
    EXPECT_GE(out, lo);
    EXPECT_LE(out, hi);
  }
}

}  // namespace
}  // namespace dcn::protocol
