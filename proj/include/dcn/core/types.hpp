// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dcn {

/// Simulated time, in integer ticks. Receipt timestamps and every delay bound
/// are expressed in this unit.
using Tick = std::int64_t;

/// Node identifiers are 1-based; 0 is reserved for the user/kernel.
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0;

inline constexpr std::size_t kMaxNodes = 255;

/// Fixed-capacity set of node ids, indexed directly by NodeId.
class NodeSet {
 public:
  void insert(NodeId id) { bits_.set(id); }
  bool contains(NodeId id) const { return bits_.test(id); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool subset_of(const NodeSet& other) const {
    return (bits_ & ~other.bits_).none();
  }
  std::vector<NodeId> members() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_.test(i)) out.push_back(static_cast<NodeId>(i));
    }
    return out;
  }
  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::bitset<kMaxNodes + 1> bits_;
};

/// Committee size and corruption bound.
struct GroupParams {
  std::size_t n = 4;
  std::size_t f = 1;

  std::size_t quorum() const { return n - f; }
  std::size_t threshold() const { return f + 1; }
  bool valid() const { return n >= 1 && n <= kMaxNodes && n > 3 * f; }
};

/// Bad argument to a primitive (range, duplicates, mixed inputs).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Not enough distinct valid contributions to meet a threshold.
class ThresholdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario document. `path()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace dcn
