// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dcn/core/rng.hpp"

namespace dcn::crypto {

using Bytes = std::vector<std::uint8_t>;

/// One evaluation of the sharing polynomials. `index` is the evaluation
/// point x (1..255); `payload[j]` is the j-th secret byte's polynomial at x.
struct IndexedShare {
  std::uint32_t index = 0;
  Bytes payload;
};

/// Supplies the random polynomial coefficients, one byte per call. Tests
/// substitute a fixed source to make share values predictable.
using CoefficientSource = std::function<std::uint8_t()>;

/// Byte-wise (k, n) Shamir sharing. Returns n payloads; payload i-1 belongs
/// to evaluation point i. Throws ParameterError unless 1 <= k <= n <= 255.
std::vector<Bytes> shamir_split(std::span<const std::uint8_t> secret,
                                std::size_t n, std::size_t k,
                                const CoefficientSource& coefficients);
std::vector<Bytes> shamir_split(std::span<const std::uint8_t> secret,
                                std::size_t n, std::size_t k, Rng& rng);

/// Lagrange interpolation at zero over the first k shares. All supplied
/// indices must be distinct and in 1..255 and all payloads the same length.
/// Inconsistent shares are not detected here.
Bytes shamir_reconstruct(const std::vector<IndexedShare>& shares,
                         std::size_t k);

}  // namespace dcn::crypto
