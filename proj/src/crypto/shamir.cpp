// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/crypto/shamir.hpp"

#include <string>

#include "dcn/core/types.hpp"
#include "dcn/crypto/gf256.hpp"

namespace dcn::crypto {

std::vector<Bytes> shamir_split(std::span<const std::uint8_t> secret,
                                std::size_t n, std::size_t k,
                                const CoefficientSource& coefficients) {
  if (k < 1 || k > n || n > 255) {
    throw ParameterError("shamir_split: need 1 <= k <= n <= 255, got n=" +
                         std::to_string(n) + " k=" + std::to_string(k));
  }
  std::vector<Bytes> shares(n, Bytes(secret.size()));
  std::vector<std::uint8_t> poly(k);
  for (std::size_t b = 0; b < secret.size(); ++b) {
    poly[0] = secret[b];
    for (std::size_t j = 1; j < k; ++j) poly[j] = coefficients();
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = static_cast<std::uint8_t>(i + 1);
      // Horner evaluation.
      std::uint8_t y = 0;
      for (std::size_t j = k; j-- > 0;) {
        y = gf256::add(gf256::mul(y, x), poly[j]);
      }
      shares[i][b] = y;
    }
  }
  return shares;
}

std::vector<Bytes> shamir_split(std::span<const std::uint8_t> secret,
                                std::size_t n, std::size_t k, Rng& rng) {
  return shamir_split(secret, n, k, [&rng] { return rng.byte(); });
}

Bytes shamir_reconstruct(const std::vector<IndexedShare>& shares,
                         std::size_t k) {
  if (k < 1 || shares.size() < k) {
    throw ParameterError("shamir_reconstruct: need at least k=" +
                         std::to_string(k) + " shares, got " +
                         std::to_string(shares.size()));
  }
  std::vector<bool> seen(256, false);
  for (const auto& s : shares) {
    if (s.index < 1 || s.index > 255) {
      throw ParameterError("shamir_reconstruct: share index out of range");
    }
    if (seen[s.index]) {
      throw ParameterError("shamir_reconstruct: duplicate share index " +
                           std::to_string(s.index));
    }
    seen[s.index] = true;
    if (s.payload.size() != shares.front().payload.size()) {
      throw ParameterError("shamir_reconstruct: payload length mismatch");
    }
  }

  // Lagrange basis values at x = 0.
  std::vector<std::uint8_t> basis(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto xi = static_cast<std::uint8_t>(shares[i].index);
    std::uint8_t num = 1;
    std::uint8_t den = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const auto xj = static_cast<std::uint8_t>(shares[j].index);
      num = gf256::mul(num, xj);
      den = gf256::mul(den, gf256::add(xj, xi));
    }
    basis[i] = gf256::div(num, den);
  }

  Bytes secret(shares.front().payload.size(), 0);
  for (std::size_t b = 0; b < secret.size(); ++b) {
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < k; ++i) {
      acc = gf256::add(acc, gf256::mul(basis[i], shares[i].payload[b]));
    }
    secret[b] = acc;
  }
  return secret;
}

}  // namespace dcn::crypto
