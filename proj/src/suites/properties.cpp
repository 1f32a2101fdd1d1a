// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "dcn/core/rng.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/crypto/secret_share.hpp"
#include "dcn/crypto/shamir.hpp"
#include "dcn/crypto/signatures.hpp"
#include "dcn/protocol/pi_aa.hpp"
#include "dcn/protocol/pi_aba.hpp"
#include "dcn/sim/random_net.hpp"
#include "dcn/suites/suites.hpp"

namespace dcn::suites {
namespace {

using crypto::Bytes;
using protocol::Body;

crypto::InstanceHash run_instance(std::uint64_t i) {
  crypto::Encoder enc("dcn/suite-run/v1");
  enc.u64(i);
  return crypto::InstanceHash{crypto::sha256(enc.data())};
}

double chi_square_p(const std::vector<std::size_t>& counts) {
  const double total = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  boost::math::chi_squared_distribution<double> dist(
      static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

Bytes random_bytes(Rng& rng, std::size_t len) {
  Bytes out(len);
  for (auto& b : out) b = rng.byte();
  return out;
}

}  // namespace

AbaStats aba_expected_rounds(std::size_t runs, std::uint64_t seed, std::size_t n,
                             std::size_t f) {
  AbaStats st;
  double total = 0;
  const protocol::AbaParams params{GroupParams{n, f}};
  for (std::size_t run = 0; run < runs; ++run) {
    const bool byzantine = run % 2 == 1;
    const auto instance = run_instance(seed * 1'000'003 + run);
    auto coin = std::make_shared<protocol::IdealCoin>(seed ^ (run * 0x9E3779B97F4A7C15ULL));
    std::vector<std::unique_ptr<protocol::PiAba>> nodes(n + 1);
    for (NodeId v = 1; v <= n; ++v) {
      nodes[v] = std::make_unique<protocol::PiAba>(params, instance, coin);
    }
    sim::RandomOrderNet net(n, seed + run);
    net.set_handler([&nodes](NodeId to, NodeId from, const Body& body) {
      if (auto* m = std::get_if<protocol::AbaBval>(&body)) return nodes[to]->on_message(from, *m);
      if (auto* m = std::get_if<protocol::AbaAux>(&body)) return nodes[to]->on_message(from, *m);
      if (auto* m = std::get_if<protocol::AbaTerm>(&body)) return nodes[to]->on_message(from, *m);
      return protocol::PiAba::Out{};
    });
    const std::size_t honest = byzantine ? n - f : n;
    for (NodeId b = static_cast<NodeId>(honest + 1); b <= n; ++b) {
      net.set_byzantine(b, [](NodeId, NodeId to, const Body& body) -> std::optional<Body> {
        Body out = body;
        const auto bit = static_cast<std::uint8_t>(to & 1);
        if (auto* m = std::get_if<protocol::AbaBval>(&out)) m->bit = bit;
        if (auto* m = std::get_if<protocol::AbaAux>(&out)) m->bit = bit;
        if (auto* m = std::get_if<protocol::AbaTerm>(&out)) m->bit = bit;
        return out;
      });
    }
    for (NodeId v = 1; v <= n; ++v) {
      net.broadcast(v, nodes[v]->on_input(static_cast<std::uint8_t>(v % 2)));
    }
    net.run();
    std::uint32_t phases = 0;
    std::optional<std::uint8_t> agreed;
    for (NodeId v = 1; v <= honest; ++v) {
      const auto d = nodes[v]->decided();
      if (!d) {
        ++st.undecided;
        continue;
      }
      if (agreed && *agreed != *d) ++st.disagreements;
      agreed = d;
      phases = std::max(phases, nodes[v]->decision_phase());
    }
    ++st.runs;
    total += phases;
    st.max_phases = std::max(st.max_phases, phases);
  }
  st.mean_phases = st.runs ? total / static_cast<double>(st.runs) : 0;
  return st;
}

std::uint32_t aa_log_bound(std::int64_t spread, std::int64_t eps_num, std::int64_t eps_den) {
  const __int128 s = std::max<std::int64_t>(1, spread);
  std::uint32_t t = 0;
  while (s * eps_den > static_cast<__int128>(eps_num) << t) ++t;
  return t;
}

AaStats aa_contract(const std::vector<std::int64_t>& spreads, std::size_t seeds_per_spread,
                    std::uint64_t seed) {
  AaStats st;
  enum Mode { kSilent, kInRange, kEquivocate, kModes };
  for (std::size_t n : {4, 7, 10}) {
    const std::size_t f = (n - 1) / 3;
    const protocol::AaParams params{GroupParams{n, f}};
    for (std::int64_t spread : spreads) {
      const std::uint32_t bound = aa_log_bound(spread, params.epsilon_num, params.epsilon_den);
      for (std::size_t k = 0; k < seeds_per_spread; ++k) {
        const std::uint64_t run_seed = seed * 7'000'003 + n * 100'003 + spread * 31 + k;
        Rng rng(run_seed);
        const Mode mode = static_cast<Mode>(k % kModes);
        std::vector<std::unique_ptr<protocol::PiAa>> nodes(n + 1);
        for (NodeId v = 1; v <= n; ++v) nodes[v] = std::make_unique<protocol::PiAa>(params, v);
        sim::RandomOrderNet net(n, run_seed);
        net.set_handler([&nodes](NodeId to, NodeId from, const Body& body) {
          if (auto* m = std::get_if<protocol::AaRbc>(&body)) return nodes[to]->on_message(from, *m);
          if (auto* m = std::get_if<protocol::AaWitness>(&body)) {
            return nodes[to]->on_message(from, *m);
          }
          return protocol::PiAa::Out{};
        });
        auto byz_rng = std::make_shared<Rng>(run_seed ^ 0x5DEECE66DULL);
        for (NodeId b = static_cast<NodeId>(n - f + 1); b <= n; ++b) {
          net.set_byzantine(b, [mode, byz_rng, spread](NodeId, NodeId to,
                                                        const Body& body) -> std::optional<Body> {
            if (mode == kSilent) return std::nullopt;
            Body out = body;
            if (auto* m = std::get_if<protocol::AaRbc>(&out)) {
              m->value = Dyadic::from_int(mode == kInRange ? byz_rng->uniform(0, spread)
                                                           : (to % 2 ? 0 : spread));
            }
            return out;
          });
        }
        std::vector<Dyadic> inputs(n + 1);
        for (NodeId v = 1; v <= n; ++v) {
          const std::int64_t x = v == 1 ? 0 : v == 2 ? spread : rng.uniform(0, spread);
          inputs[v] = Dyadic::from_int(x);
        }
        for (NodeId v = 1; v <= n; ++v) net.broadcast(v, nodes[v]->on_input(inputs[v]));
        net.run();

        ++st.runs;
        std::optional<Dyadic> lo, hi;
        std::uint32_t rounds = 0;
        bool missing = false;
        for (NodeId v = 1; v <= n - f; ++v) {
          const auto out = nodes[v]->output();
          if (!out) {
            missing = true;
            continue;
          }
          if (*out < Dyadic::from_int(0) || *out > Dyadic::from_int(spread)) {
            ++st.containment_failures;
          }
          lo = lo ? std::min(*lo, *out) : *out;
          hi = hi ? std::max(*hi, *out) : *out;
          rounds = std::max(rounds, nodes[v]->round_budget());
        }
        if (missing) ++st.missing_outputs;
        if (lo && !(*hi - *lo).abs_less_than(params.epsilon_num, params.epsilon_den)) {
          ++st.gap_failures;
        }
        if (rounds > bound + kAaRoundSlack) ++st.round_bound_failures;
        if (rounds > bound) st.max_excess = std::max(st.max_excess, rounds - bound);
      }
    }
  }
  return st;
}

CryptoStats crypto_properties(std::uint64_t seed, std::size_t trials, std::size_t fuzz_ops) {
  CryptoStats st;
  Rng rng(seed);

  // Every subset of at least k shares reconstructs, for all k <= n <= 10.
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const Bytes secret = random_bytes(rng, 8);
      const auto shares = crypto::shamir_split(secret, n, k, rng);
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) < k) continue;
        std::vector<crypto::IndexedShare> subset;
        for (std::uint32_t i = 0; i < n; ++i) {
          if (mask & (1u << i)) subset.push_back({i + 1, shares[i]});
        }
        ++st.shamir_subsets;
        if (crypto::shamir_reconstruct(subset, k) != secret) ++st.shamir_failures;
      }
    }
  }

  // k - 1 = 2 shares of a (3, 5) sharing look uniform whatever the secret.
  for (std::uint8_t secret_byte : {std::uint8_t{0x00}, std::uint8_t{0xA5}}) {
    std::vector<std::size_t> first(256), second(256), joint(256);
    const Bytes secret{secret_byte};
    for (std::size_t t = 0; t < trials; ++t) {
      const auto shares = crypto::shamir_split(secret, 5, 3, rng);
      ++first[shares[0][0]];
      ++second[shares[1][0]];
      ++joint[(shares[0][0] >> 4) << 4 | (shares[1][0] >> 4)];
    }
    for (const auto* counts : {&first, &second, &joint}) {
      const double p = chi_square_p(*counts);
      st.chi_square_p.push_back(p);
      st.min_p = std::min(st.min_p, p);
    }
  }

  // Adversary API fuzz: the adversary holds f node keys and may call any
  // public operation; no honest node ever signs `target`.
  const GroupParams group{7, 2};
  auto registry = std::make_shared<crypto::KeyRegistry>(group, seed ^ 0xF00D);
  const crypto::IdealThresholdScheme scheme(registry);
  const std::vector<NodeId> corrupted = {6, 7};
  const Bytes honest_msg = {'o', 'k'};
  std::vector<crypto::PartialSignature> honest_partials;
  for (NodeId v = 1; v <= 5; ++v) {
    honest_partials.push_back(scheme.sign_partial(registry->node_key(v), honest_msg));
  }
  const auto legit = scheme.combine(honest_partials);
  auto forged = [&](const crypto::ThresholdSignature& sig, const Bytes& msg) {
    if (scheme.verify(sig, msg)) ++st.forgeries;
  };
  for (std::size_t op = 0; op < fuzz_ops; ++op) {
    ++st.fuzz_operations;
    const Bytes target = random_bytes(rng, 1 + rng.uniform(0, 15));
    switch (rng.uniform(0, 6)) {
      case 0: {  // partial for an honest signer with a guessed proof
        const crypto::PartialSignature p{static_cast<NodeId>(rng.uniform(1, 5)), target,
                                         random_bytes(rng, 32)};
        if (scheme.verify_partial(p)) ++st.forgeries;
        break;
      }
      case 1: {  // combine corrupted partials padded with guesses
        std::vector<crypto::PartialSignature> ps;
        for (NodeId c : corrupted) ps.push_back(scheme.sign_partial(registry->node_key(c), target));
        ps.push_back({static_cast<NodeId>(rng.uniform(1, 5)), target, random_bytes(rng, 32)});
        try {
          forged(scheme.combine(ps), target);
        } catch (const std::exception&) {
        }
        break;
      }
      case 2: {  // hand-built aggregate
        crypto::Encoder agg("");
        std::size_t count = 0;
        for (NodeId c : corrupted) {
          agg.u32(c).raw(scheme.sign_partial(registry->node_key(c), target).proof);
          ++count;
        }
        const auto extra = rng.uniform(1, 3);
        for (std::int64_t i = 0; i < extra; ++i) {
          agg.u32(static_cast<std::uint32_t>(rng.uniform(0, 9))).raw(random_bytes(rng, 32));
          ++count;
        }
        forged(crypto::ThresholdSignature{target, agg.take(), count}, target);
        break;
      }
      case 3: {  // replay a legitimate signature on another message
        auto sig = legit;
        sig.message = target;
        forged(sig, target);
        break;
      }
      case 4: {  // mutate a legitimate signature
        auto sig = legit;
        const auto pos = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(sig.aggregate.size()) - 1));
        sig.aggregate[pos] ^= static_cast<std::uint8_t>(1u << rng.uniform(0, 7));
        if (rng.coin()) sig.contributor_count = static_cast<std::size_t>(rng.uniform(0, 6));
        forged(sig, target);
        break;
      }
      case 5: {  // duplicate one corrupted contribution f+1 times
        crypto::Encoder agg("");
        const auto p = scheme.sign_partial(registry->node_key(corrupted[0]), target);
        for (std::size_t i = 0; i <= group.f; ++i) agg.u32(corrupted[0]).raw(p.proof);
        forged(crypto::ThresholdSignature{target, agg.take(), group.f + 1}, target);
        break;
      }
      default: {  // forge the user's signature on a share
        crypto::SecretShare share{static_cast<std::uint32_t>(rng.uniform(1, 7)),
                                  random_bytes(rng, 8),
                                  crypto::UserSignature{1, random_bytes(rng, 32)}};
        if (crypto::verify_share(*registry, run_instance(op), share)) ++st.forgeries;
        break;
      }
    }
  }
  return st;
}

std::vector<std::int64_t> default_spreads() {
  std::vector<std::int64_t> out;
  for (int e = 0; e <= 14; ++e) out.push_back(std::int64_t{1} << e);
  return out;
}

std::vector<ComplexityPoint> rounds_complexity(const std::vector<std::int64_t>& spreads,
                                               std::size_t seeds, std::size_t jobs,
                                               bool synchronous, std::size_t n) {
  std::vector<LabeledScenario> scenarios;
  for (std::int64_t spread : spreads) {
    sim::ScenarioConfig c;
    c.n = n;
    c.f = (n - 1) / 3;
    c.adversary.strategy = sim::Strategy::kEquivocateInit;
    c.adversary.magnitude = 1'000'000;
    // The earliest receivers are corrupted so their INITs are in play.
    std::vector<NodeId> early;
    for (NodeId v = 1; v <= c.f; ++v) early.push_back(v);
    c.adversary.corrupted = early;
    if (synchronous) {
      c.delta_ext = std::max<std::int64_t>(1, spread);
    } else {
      c.scheduler.kind = sim::SchedulerKind::kAsyncRandom;
    }
    for (NodeId v = 1; v <= n; ++v) {
      c.user.receipt_offsets.push_back(
          static_cast<Tick>((v - 1) * spread / static_cast<std::int64_t>(n - 1)));
    }
    c.name = (synchronous ? "sync/spread=" : "async/spread=") + std::to_string(spread);
    for (std::size_t s = 1; s <= seeds; ++s) {
      c.seed = s;
      scenarios.push_back({c.name, c});
    }
  }
  const auto outcomes = run_all(scenarios, jobs);
  std::vector<ComplexityPoint> points;
  for (std::size_t i = 0; i < spreads.size(); ++i) {
    ComplexityPoint p;
    p.spread = spreads[i];
    double total = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto& o = outcomes[i * seeds + s];
      ++p.runs;
      if (!o.error.empty()) {
        ++p.violations;
        continue;
      }
      p.violations += o.report.violations.size();
      for (const auto& inst : o.report.instances) {
        total += inst.rounds_used;
        p.max_rounds = std::max(p.max_rounds, inst.rounds_used);
        if (inst.liveness == check::Liveness::kDelivered) ++p.delivered;
      }
    }
    p.mean_rounds = p.runs ? total / static_cast<double>(p.runs) : 0;
    points.push_back(p);
  }
  return points;
}

LinearFit fit_log2(const std::vector<ComplexityPoint>& points, double offset) {
  LinearFit fit;
  const double k = static_cast<double>(points.size());
  if (points.size() < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : points) {
    const double x = std::log2(offset + static_cast<double>(p.spread));
    const double y = p.mean_rounds;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / k, vy = syy - sy * sy / k, cxy = sxy - sx * sy / k;
  if (vx <= 0) return fit;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / k;
  fit.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

}  // namespace dcn::suites
