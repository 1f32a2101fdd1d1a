// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>
#include <string>

#include <gtest/gtest.h>

#include "dcn/core/rng.hpp"
#include "dcn/crypto/secret_share.hpp"
#include "dcn/crypto/shamir.hpp"
#include "dcn/submission/envelope.hpp"
#include "dcn/submission/ledger.hpp"

namespace dcn::submission {
namespace {

Bytes bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

class LedgerTest : public ::testing::Test {
 protected:
  LedgerTest()
      : registry_(std::make_shared<crypto::KeyRegistry>(GroupParams{4, 1}, 99)),
        scheme_(std::make_shared<crypto::IdealThresholdScheme>(registry_)) {}

  MempoolEntry signed_entry(const std::string& tx, Tick tau) {
    MempoolEntry e;
    e.tx = bytes_of(tx);
    e.nonce = bytes_of("nonce-" + tx);
    e.h = crypto::hash_instance(e.tx, e.nonce);
    e.tau = tau;
    const Bytes msg = stamp_message(e.h, tau);
    std::vector<crypto::PartialSignature> partials;
    for (NodeId v : {1u, 3u}) {
      partials.push_back(scheme_->sign_partial(registry_->node_key(v), msg));
    }
    e.sig = scheme_->combine(partials);
    e.submitter = 1;
    return e;
  }

  std::shared_ptr<crypto::KeyRegistry> registry_;
  std::shared_ptr<crypto::IdealThresholdScheme> scheme_;
};

TEST_F(LedgerTest, AcceptsNonDecreasingBlock) {
  Block b;
  b.entries = {signed_entry("a", 5), signed_entry("b", 5), signed_entry("c", 7)};
  const auto check = validator_check_block(b, 5, *scheme_);
  EXPECT_EQ(check.verdict, BlockVerdict::kAccept);
}

TEST_F(LedgerTest, RejectsDecreasingTimestamps) {
  Block b;
  b.entries = {signed_entry("a", 5), signed_entry("b", 4)};
  const auto check = validator_check_block(b, 0, *scheme_);
  EXPECT_EQ(check.verdict, BlockVerdict::kOrder);
  EXPECT_EQ(check.index, 1u);
}

TEST_F(LedgerTest, RejectsForgedSignature) {
  Block b;
  b.entries = {signed_entry("a", 5)};
  b.entries[0].tau = 6;  // signature covers (h, 5)
  EXPECT_EQ(validator_check_block(b, 0, *scheme_).verdict, BlockVerdict::kSig);

  MempoolEntry fake = signed_entry("b", 5);
  fake.sig.aggregate.assign(fake.sig.aggregate.size(), 0x5a);
  EXPECT_FALSE(entry_valid(fake, *scheme_));
}

TEST_F(LedgerTest, RejectsHashMismatch) {
  Block b;
  b.entries = {signed_entry("a", 5)};
  b.entries[0].tx = bytes_of("A");
  EXPECT_EQ(validator_check_block(b, 0, *scheme_).verdict, BlockVerdict::kHash);
}

TEST_F(LedgerTest, RejectsEntryBelowPreviousBlock) {
  Block b;
  b.entries = {signed_entry("a", 5)};
  EXPECT_EQ(validator_check_block(b, 6, *scheme_).verdict, BlockVerdict::kBoundary);
}

TEST_F(LedgerTest, RejectsDuplicateTransaction) {
  Block b;
  b.entries = {signed_entry("a", 5), signed_entry("a", 5)};
  EXPECT_EQ(validator_check_block(b, 0, *scheme_).verdict, BlockVerdict::kDuplicate);
}

TEST_F(LedgerTest, MempoolKeepsFirstValidPerHash) {
  Mempool pool(scheme_);
  MempoolEntry bad = signed_entry("x", 9);
  bad.tau = 10;
  EXPECT_FALSE(pool.submit(bad, 1).valid);
  EXPECT_FALSE(pool.contains(bad.h));
  EXPECT_TRUE(pool.submit(signed_entry("x", 9), 2).valid);
  EXPECT_TRUE(pool.submit(signed_entry("x", 9), 3).duplicate);
  pool.submit(signed_entry("w", 3), 4);
  ASSERT_EQ(pool.accepted().size(), 2u);

  const Block block = pool.build_block(0);
  ASSERT_EQ(block.entries.size(), 2u);
  EXPECT_EQ(block.entries[0].tau, 3);
  EXPECT_EQ(block.entries[1].tau, 9);
  EXPECT_EQ(validator_check_block(block, 0, *scheme_).verdict, BlockVerdict::kAccept);
}

TEST(Envelope, SharesReconstructTxAndNonce) {
  const GroupParams g{7, 2};
  crypto::KeyRegistry reg(g, 1);
  Rng rng(5);
  const Bytes tx = bytes_of("transfer 10 to bob");
  const auto env = user_create_envelope(tx, g, reg.user_key(1), rng, 16);
  ASSERT_EQ(env.shares.size(), 7u);
  EXPECT_EQ(env.h, crypto::hash_instance(env.tx, env.nonce));
  for (const auto& s : env.shares) EXPECT_TRUE(crypto::verify_share(reg, env.h, s));

  std::vector<crypto::IndexedShare> pick;
  for (std::uint32_t i : {2u, 5u, 7u}) pick.push_back({i, env.shares[i - 1].payload});
  Bytes got_tx, got_nonce;
  ASSERT_TRUE(split_secret(crypto::shamir_reconstruct(pick, 3), 16, got_tx, got_nonce));
  EXPECT_EQ(got_tx, tx);
  EXPECT_EQ(got_nonce, env.nonce);
}

TEST(Envelope, FreshNoncePerEnvelope) {
  const GroupParams g{4, 1};
  crypto::KeyRegistry reg(g, 1);
  Rng rng(5);
  const auto a = user_create_envelope(bytes_of("same"), g, reg.user_key(1), rng);
  const auto b = user_create_envelope(bytes_of("same"), g, reg.user_key(1), rng);
  EXPECT_NE(a.nonce, b.nonce);
  EXPECT_NE(a.h, b.h);
}

TEST(Envelope, ContradictorySharesFailHashWhenMixed) {
  const GroupParams g{4, 1};
  crypto::KeyRegistry reg(g, 1);
  Rng rng(8);
  const auto env =
      user_create_contradictory_envelope(bytes_of("tx"), g, reg.user_key(1), rng, 2, 8);
  // Every share carries a valid user signature, so nodes cannot tell.
  for (const auto& s : env.shares) EXPECT_TRUE(crypto::verify_share(reg, env.h, s));

  auto rebuild = [&](std::uint32_t i, std::uint32_t j) {
    Bytes tx, nonce;
    const Bytes secret = crypto::shamir_reconstruct(
        {{i, env.shares[i - 1].payload}, {j, env.shares[j - 1].payload}}, 2);
    split_secret(secret, 8, tx, nonce);
    return crypto::hash_instance(tx, nonce) == env.h;
  };
  EXPECT_TRUE(rebuild(3, 4));   // same sharing
  EXPECT_FALSE(rebuild(1, 3));  // mixed
}

TEST(Envelope, StampBindsHashAndTimestamp) {
  const auto h = crypto::hash_instance(bytes_of("a"), bytes_of("b"));
  EXPECT_NE(stamp_message(h, 5), stamp_message(h, 6));
  EXPECT_EQ(stamp_message(h, 5), stamp_message(h, 5));
}

TEST(Envelope, SplitSecretRejectsShortInput) {
  Bytes tx, nonce;
  EXPECT_FALSE(split_secret(bytes_of("abc"), 4, tx, nonce));
  EXPECT_TRUE(split_secret(bytes_of("abcd"), 4, tx, nonce));
  EXPECT_TRUE(tx.empty());
}

}  // namespace
}  // namespace dcn::submission
