// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/protocol/messages.hpp"

#include <type_traits>

namespace dcn::protocol {
namespace {

// FNV-1a, 64-bit.
class Fnv {
 public:
  void byte(std::uint8_t b) {
    h_ ^= b;
    h_ *= 0x100000001B3ULL;
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void bytes(std::span<const std::uint8_t> b) {
    u64(b.size());
    for (auto x : b) byte(x);
  }
  void dyadic(const Dyadic& d) {
    const auto m = static_cast<unsigned __int128>(d.mantissa());
    u64(static_cast<std::uint64_t>(m));
    u64(static_cast<std::uint64_t>(m >> 64));
    u64(d.exponent());
  }
  void share(const crypto::SecretShare& s) {
    u64(s.node_index);
    bytes(s.payload);
    u64(s.user_sig.user);
    bytes(s.user_sig.proof);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

}  // namespace

std::string_view kind_name(const Body& body) {
  static constexpr std::string_view kNames[] = {
      "USER_SUBMIT", "INIT_TS", "AA_RBC",      "AA_WITNESS",  "ABA_BVAL",
      "ABA_AUX",     "ABA_TERM", "SIG_PARTIAL", "SHARE_REVEAL"};
  return kNames[body.index()];
}

std::uint64_t message_digest(const ProtocolMessage& msg) {
  Fnv h;
  for (auto b : msg.instance.digest) h.byte(b);
  h.u64(msg.body.index());
  std::visit(
      [&h](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UserSubmit> ||
                      std::is_same_v<T, ShareReveal>) {
          h.share(m.share);
        } else if constexpr (std::is_same_v<T, InitTs>) {
          h.u64(static_cast<std::uint64_t>(m.timestamp));
        } else if constexpr (std::is_same_v<T, AaRbc>) {
          h.u64(static_cast<std::uint64_t>(m.phase));
          h.u64(m.round);
          h.u64(m.origin);
          h.dyadic(m.value);
        } else if constexpr (std::is_same_v<T, AaWitness>) {
          h.u64(m.round);
          for (NodeId id : m.senders.members()) h.u64(id);
        } else if constexpr (std::is_same_v<T, AbaBval> ||
                             std::is_same_v<T, AbaAux>) {
          h.u64(m.phase);
          h.u64(m.bit);
        } else if constexpr (std::is_same_v<T, AbaTerm>) {
          h.u64(m.from_phase);
          h.u64(m.bit);
        } else if constexpr (std::is_same_v<T, SigPartial>) {
          h.u64(static_cast<std::uint64_t>(m.tau));
          h.u64(m.partial.signer);
          h.bytes(m.partial.message);
          h.bytes(m.partial.proof);
        }
      },
      msg.body);
  return h.value();
}

std::int64_t message_value(const Body& body) {
  return std::visit(
      [](const auto& m) -> std::int64_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, InitTs>) {
          return m.timestamp;
        } else if constexpr (std::is_same_v<T, AaRbc>) {
          return m.value.floor();
        } else if constexpr (std::is_same_v<T, AaWitness>) {
          return m.round;
        } else if constexpr (std::is_same_v<T, AbaBval> ||
                             std::is_same_v<T, AbaAux> ||
                             std::is_same_v<T, AbaTerm>) {
          return m.bit;
        } else if constexpr (std::is_same_v<T, SigPartial>) {
          return m.tau;
        } else if constexpr (std::is_same_v<T, UserSubmit> ||
                             std::is_same_v<T, ShareReveal>) {
          return m.share.node_index;
        } else {
          return 0;
        }
      },
      body);
}

}  // namespace dcn::protocol
