// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/pi_aba.hpp"

#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "dcn/core/rng.hpp"
#include "support/mini_net.hpp"

namespace dcn::protocol {
namespace {

using testing::MiniNet;

// Coin returning a scripted bit per phase (phase 1 -> bits[0], ...).
class ScriptedCoin final : public CommonCoin {
 public:
  explicit ScriptedCoin(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
  std::uint8_t flip(const crypto::InstanceHash&, std::uint32_t phase) const override {
    return bits_[(phase - 1) % bits_.size()];
  }

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Byz { kSilent, kFlip, kSplit };

struct AbaRun {
  std::vector<std::unique_ptr<PiAba>> nodes;
};

AbaRun run_aba(std::size_t n, std::size_t f, const std::vector<int>& inputs,
               const std::vector<NodeId>& byz, Byz mode, std::uint64_t seed,
               std::shared_ptr<const CommonCoin> coin = nullptr,
               NodeSet slow = {}) {
  if (!coin) coin = std::make_shared<IdealCoin>(seed);
  crypto::InstanceHash h;
  h.digest[0] = static_cast<std::uint8_t>(seed);
  h.digest[1] = static_cast<std::uint8_t>(seed >> 8);
  AbaRun run;
  run.nodes.resize(n + 1);
  for (NodeId i = 1; i <= n; ++i) {
    run.nodes[i] = std::make_unique<PiAba>(AbaParams{GroupParams{n, f}}, h, coin);
  }
  MiniNet net(n, seed);
  net.set_slow(slow);
  net.set_handler([&run](NodeId to, NodeId from, const Body& body) {
    return std::visit(
        [&](const auto& m) -> PiAba::Out {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, AbaBval> || std::is_same_v<T, AbaAux> ||
                        std::is_same_v<T, AbaTerm>) {
            return run.nodes[to]->on_message(from, m);
          }
          return {};
        },
        body);
  });
  for (NodeId b : byz) {
    net.set_byzantine(b, [mode](NodeId, NodeId to, const Body& body) -> std::optional<Body> {
      if (mode == Byz::kSilent) return std::nullopt;
      Body out = body;
      auto rewrite = [&](std::uint8_t& bit) {
        bit = mode == Byz::kFlip ? bit ^ 1 : static_cast<std::uint8_t>(to % 2);
      };
      if (auto* m = std::get_if<AbaBval>(&out)) rewrite(m->bit);
      if (auto* m = std::get_if<AbaAux>(&out)) rewrite(m->bit);
      if (auto* m = std::get_if<AbaTerm>(&out)) rewrite(m->bit);
      return out;
    });
    // Seed byzantine traffic in both bits for every early phase.
    for (std::uint32_t r = 1; r <= 6 && mode != Byz::kSilent; ++r) {
      for (NodeId to = 1; to <= n; ++to) {
        const std::uint8_t bit = mode == Byz::kSplit ? to % 2 : 1;
        net.send(b, to, AbaBval{r, bit});
        net.send(b, to, AbaAux{r, bit});
      }
    }
  }
  for (NodeId i = 1; i <= n; ++i) {
    if (i <= inputs.size() && inputs[i - 1] >= 0) {
      net.broadcast(i, run.nodes[i]->on_input(static_cast<std::uint8_t>(inputs[i - 1])));
    }
  }
  net.run();
  return run;
}

std::vector<NodeId> tail_ids(std::size_t n, std::size_t f) {
  std::vector<NodeId> out;
  for (NodeId b = static_cast<NodeId>(n - f + 1); b <= n; ++b) out.push_back(b);
  return out;
}

TEST(PiAba, IdealCoinIsDeterministicPerKey) {
  IdealCoin a(5), b(5);
  crypto::InstanceHash h;
  int ones = 0;
  for (std::uint32_t r = 1; r <= 200; ++r) {
    EXPECT_EQ(a.flip(h, r), b.flip(h, r));
    ones += a.flip(h, r);
  }
  EXPECT_GT(ones, 60);
  EXPECT_LT(ones, 140);
}

TEST(PiAba, UnanimousZeroWithMatchingCoinDecidesInPhaseOne) {
  auto coin = std::make_shared<ScriptedCoin>(std::vector<std::uint8_t>{0});
  auto run = run_aba(4, 1, {0, 0, 0, 0}, {}, Byz::kSilent, 1, coin);
  for (NodeId i = 1; i <= 4; ++i) {
    EXPECT_EQ(run.nodes[i]->decided(), 0);
    EXPECT_EQ(run.nodes[i]->decision_phase(), 1u);
  }
}

TEST(PiAba, UnanimousZeroWithOppositeCoinDecidesInPhaseTwo) {
  // Phase 1: values {0}, coin 1 -> keep 0. Phase 2: coin 0 -> decide.
  auto coin = std::make_shared<ScriptedCoin>(std::vector<std::uint8_t>{1, 0});
  auto run = run_aba(4, 1, {0, 0, 0, 0}, {}, Byz::kSilent, 1, coin);
  for (NodeId i = 1; i <= 4; ++i) {
    EXPECT_EQ(run.nodes[i]->decided(), 0);
    EXPECT_EQ(run.nodes[i]->decision_phase(), 2u);
  }
}

TEST(PiAba, WeakValidityAgainstEquivocation) {
  for (int bit : {0, 1}) {
    for (Byz mode : {Byz::kSilent, Byz::kFlip, Byz::kSplit}) {
      for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto run = run_aba(4, 1, {bit, bit, bit, -1}, {4}, mode, seed);
        for (NodeId i = 1; i <= 3; ++i) {
          ASSERT_EQ(run.nodes[i]->decided(), bit) << "seed " << seed;
        }
      }
    }
  }
}

TEST(PiAba, AgreementOnSplitInputs) {
  for (std::size_t n : {4u, 7u, 10u}) {
    const std::size_t f = (n - 1) / 3;
    for (Byz mode : {Byz::kSilent, Byz::kFlip, Byz::kSplit}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        std::vector<int> inputs(n, -1);
        for (std::size_t i = 0; i < n - f; ++i) inputs[i] = static_cast<int>((i + seed) % 2);
        auto run = run_aba(n, f, inputs, tail_ids(n, f), mode, seed);
        auto first = run.nodes[1]->decided();
        ASSERT_TRUE(first.has_value());
        for (NodeId i = 2; i <= n - f; ++i) EXPECT_EQ(run.nodes[i]->decided(), first);
      }
    }
  }
}

TEST(PiAba, TooFewParticipantsNeverDecide) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto run = run_aba(4, 1, {1, -1, -1, -1}, {4}, Byz::kFlip, seed);
    for (NodeId i = 1; i <= 3; ++i) EXPECT_FALSE(run.nodes[i]->decided().has_value());
  }
}

TEST(PiAba, SlowNodeDecidesLikeTheRest) {
  // Node 3 hears nothing until everyone else has decided and halted.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    NodeSet slow;
    slow.insert(3);
    auto run = run_aba(4, 1, {0, 1, 1, -1}, {4}, Byz::kSplit, seed, nullptr, slow);
    ASSERT_TRUE(run.nodes[3]->decided().has_value()) << seed;
    EXPECT_EQ(run.nodes[3]->decided(), run.nodes[1]->decided());
    EXPECT_EQ(run.nodes[2]->decided(), run.nodes[1]->decided());
  }
}

TEST(PiAba, MeanPhasesOnSplitInputs) {
  double total = 0;
  std::uint32_t worst = 0;
  const int runs = 1000;
  for (int seed = 0; seed < runs; ++seed) {
    auto run = run_aba(4, 1, {0, 1, seed % 2, -1}, {4}, Byz::kSilent, seed);
    for (NodeId i = 1; i <= 3; ++i) {
      ASSERT_TRUE(run.nodes[i]->decided().has_value());
      total += run.nodes[i]->decision_phase();
      worst = std::max(worst, run.nodes[i]->decision_phase());
    }
  }
  EXPECT_LE(total / (3 * runs), 4.0);
  EXPECT_LE(worst, 20u);
}

TEST(PiAba, DuplicateInputIgnored) {
  PiAba aba(AbaParams{GroupParams{4, 1}}, {}, std::make_shared<IdealCoin>(1));
  EXPECT_EQ(aba.on_input(1).size(), 1u);
  EXPECT_TRUE(aba.on_input(0).empty());
}

}  // namespace
}  // namespace dcn::protocol
