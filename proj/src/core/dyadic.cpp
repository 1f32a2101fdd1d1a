// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/core/dyadic.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace dcn {
namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt to_big(Dyadic::Mantissa m) {
  const bool negative = m < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(m)
                                   : static_cast<unsigned __int128>(m);
  BigInt out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? BigInt(-out) : out;
}

// Returns (a, b) scaled to the common exponent max(ea, eb).
std::pair<Dyadic::Mantissa, Dyadic::Mantissa> align(const Dyadic& a,
                                                    const Dyadic& b,
                                                    std::uint32_t& exp) {
  exp = a.exponent() > b.exponent() ? a.exponent() : b.exponent();
  return {a.mantissa() * (static_cast<Dyadic::Mantissa>(1)
                          << (exp - a.exponent())),
          b.mantissa() * (static_cast<Dyadic::Mantissa>(1)
                          << (exp - b.exponent()))};
}

}  // namespace

Dyadic Dyadic::from_parts(Mantissa mantissa, std::uint32_t exponent) {
  if (mantissa == 0) return Dyadic(0, 0);
  while (exponent > 0 && (mantissa & 1) == 0) {
    mantissa >>= 1;
    --exponent;
  }
  return Dyadic(mantissa, exponent);
}

bool Dyadic::in_range() const {
  if (exponent_ > kMaxExponent) return false;
  const Mantissa bound = static_cast<Mantissa>(1)
                         << (kMaxMagnitudeBits + exponent_);
  return mantissa_ <= bound && mantissa_ >= -bound;
}

std::int64_t Dyadic::floor() const {
  // Arithmetic shift rounds toward negative infinity.
  return static_cast<std::int64_t>(mantissa_ >> exponent_);
}

std::strong_ordering Dyadic::fraction_vs_half() const {
  if (exponent_ == 0) return std::strong_ordering::less;
  const Mantissa whole = static_cast<Mantissa>(floor()) << exponent_;
  const Mantissa frac = mantissa_ - whole;  // in [0, 2^e)
  const Mantissa half = static_cast<Mantissa>(1) << (exponent_ - 1);
  return frac <=> half;
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<long double>(mantissa_),
                    -static_cast<int>(exponent_));
}

std::string Dyadic::to_string() const {
  const bool negative = mantissa_ < 0;
  BigInt mag = to_big(mantissa_);
  if (negative) mag = -mag;
  BigInt whole = mag >> exponent_;
  BigInt frac = mag - (whole << exponent_);
  std::string out = negative ? "-" : "";
  out += whole.str();
  if (exponent_ > 0) {
    // frac / 2^e == frac * 5^e / 10^e, exactly e decimal digits.
    BigInt scaled = frac * boost::multiprecision::pow(BigInt(5), exponent_);
    std::string digits = scaled.str();
    digits.insert(0, exponent_ - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

bool Dyadic::abs_less_than(std::int64_t num, std::int64_t den,
                           unsigned shift) const {
  BigInt mag = to_big(mantissa_);
  if (mag < 0) mag = -mag;
  return mag * den < (BigInt(num) << (exponent_ + shift));
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  std::uint32_t e = 0;
  auto [ma, mb] = align(a, b, e);
  return Dyadic::from_parts(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  std::uint32_t e = 0;
  auto [ma, mb] = align(a, b, e);
  return Dyadic::from_parts(ma - mb, e);
}

Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
  std::uint32_t e = 0;
  auto [ma, mb] = align(a, b, e);
  return Dyadic::from_parts(ma + mb, e + 1);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  if (a.exponent_ == b.exponent_) return a.mantissa_ <=> b.mantissa_;
  std::uint32_t e = 0;
  auto [ma, mb] = align(a, b, e);
  return ma <=> mb;
}

}  // namespace dcn
