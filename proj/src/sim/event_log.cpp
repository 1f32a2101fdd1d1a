// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/sim/event_log.hpp"

#include <array>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dcn::sim {
namespace {

constexpr std::array<std::string_view, 20> kKindNames = {
    "RUN_START",        "PARAMS",       "USER_CREATE",   "DELIVER",
    "RECEIPT",          "BAD_USER_MESSAGE", "INIT_OUTPUT", "AA_OUTPUT",
    "ABA_DECIDE",       "TA_OUTPUT",    "PARTIAL_REJECTED", "SIG_READY",
    "SHARE_ACCEPTED",   "RECONSTRUCT",  "ABORT",         "MEMPOOL_SUBMIT",
    "CORRUPT",          "BLOCK_ENTRY",  "BLOCK_CHECK",   "RUN_END",
};

bool is_zero(const crypto::InstanceHash& h) {
  for (auto b : h.digest) {
    if (b != 0) return false;
  }
  return true;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string_view event_kind_name(EventKind kind) {
  const auto i = static_cast<std::size_t>(kind);
  return i < kKindNames.size() ? kKindNames[i] : "?";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

std::uint64_t EventLog::append(EventRecord record) {
  if (!records_.empty() && record.tick < records_.back().tick) {
    throw std::logic_error("EventLog: records must be appended in tick order");
  }
  record.seq = records_.size();
  records_.push_back(record);
  return record.seq;
}

crypto::Digest EventLog::digest() const {
  crypto::Encoder enc("dcn/log/v1");
  enc.u64(records_.size());
  for (const auto& r : records_) {
    enc.i64(r.tick).u64(r.seq).i64(r.local_tick).u32(r.node);
    enc.u32(static_cast<std::uint32_t>(r.kind));
    enc.raw(r.instance.digest);
    enc.u32(r.peer).i64(r.a).i64(r.b).i64(r.c).i64(r.d).u64(r.digest);
  }
  return crypto::sha256(enc.data());
}

std::string EventLog::digest_hex() const { return crypto::to_hex(digest()); }

std::string EventLog::to_jsonl() const {
  std::ostringstream out;
  for (const auto& r : records_) {
    nlohmann::ordered_json j;
    j["tick"] = r.tick;
    j["seq"] = r.seq;
    j["local"] = r.local_tick;
    j["node"] = r.node;
    j["kind"] = event_kind_name(r.kind);
    j["instance"] = is_zero(r.instance) ? std::string() : r.instance.hex();
    j["peer"] = r.peer;
    j["a"] = r.a;
    j["b"] = r.b;
    j["c"] = r.c;
    j["d"] = r.d;
    j["digest"] = r.digest;
    out << j.dump() << '\n';
  }
  return out.str();
}

EventLog EventLog::from_jsonl(std::string_view text) {
  EventLog log;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      EventRecord r;
      r.tick = j.at("tick").get<Tick>();
      r.local_tick = j.at("local").get<Tick>();
      r.node = j.at("node").get<NodeId>();
      auto kind = event_kind_from_name(j.at("kind").get<std::string>());
      if (!kind) throw ConfigError(where + ".kind", "unknown event kind");
      r.kind = *kind;
      const auto hex = j.at("instance").get<std::string>();
      if (!hex.empty()) {
        if (hex.size() != 64) throw ConfigError(where + ".instance", "expected 64 hex digits");
        for (std::size_t i = 0; i < 32; ++i) {
          const int hi = hex_value(hex[2 * i]), lo = hex_value(hex[2 * i + 1]);
          if (hi < 0 || lo < 0) throw ConfigError(where + ".instance", "bad hex digit");
          r.instance.digest[i] = static_cast<std::uint8_t>(hi * 16 + lo);
        }
      }
      r.peer = j.at("peer").get<NodeId>();
      r.a = j.at("a").get<std::int64_t>();
      r.b = j.at("b").get<std::int64_t>();
      r.c = j.at("c").get<std::int64_t>();
      r.d = j.at("d").get<std::int64_t>();
      r.digest = j.at("digest").get<std::uint64_t>();
      if (j.at("seq").get<std::uint64_t>() != log.size()) {
        throw ConfigError(where + ".seq", "records out of sequence");
      }
      log.append(r);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where, e.what());
    }
  }
  return log;
}

}  // namespace dcn::sim
