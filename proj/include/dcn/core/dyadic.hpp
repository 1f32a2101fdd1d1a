// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace dcn {

/// Exact rational with a power-of-two denominator: mantissa / 2^exponent.
///
/// Approximate agreement only ever averages pairs of values that started as
/// integers, so every value it produces is dyadic and comparisons stay exact.
/// The representation is normalized (odd mantissa unless the exponent is 0),
/// so equal values compare equal bitwise.
///
/// Values outside `in_range()` are not produced by honest computation and are
/// rejected at the message boundary; within range every operation below is
/// overflow-free.
class Dyadic {
 public:
  using Mantissa = __int128;

  static constexpr int kMaxMagnitudeBits = 40;
  static constexpr std::uint32_t kMaxExponent = 80;

  constexpr Dyadic() = default;

  static Dyadic from_int(std::int64_t value) { return Dyadic(value, 0); }
  static Dyadic from_parts(Mantissa mantissa, std::uint32_t exponent);

  Mantissa mantissa() const { return mantissa_; }
  std::uint32_t exponent() const { return exponent_; }

  bool in_range() const;
  bool is_integer() const { return exponent_ == 0; }
  std::int64_t floor() const;
  // Compares the fractional part (value - floor) against one half.
  std::strong_ordering fraction_vs_half() const;

  double to_double() const;
  // Exact decimal expansion (every dyadic has one).
  std::string to_string() const;

  // |*this| < (num / den) * 2^shift, for den > 0.
  bool abs_less_than(std::int64_t num, std::int64_t den,
                     unsigned shift = 0) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic midpoint(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;

 private:
  constexpr Dyadic(Mantissa m, std::uint32_t e) : mantissa_(m), exponent_(e) {}

  Mantissa mantissa_ = 0;
  std::uint32_t exponent_ = 0;
};

}  // namespace dcn
