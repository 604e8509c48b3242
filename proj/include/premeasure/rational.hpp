/*
 * Copyright 2026 The premeasure Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace premeasure {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always reduced, denominator positive. Intermediate products are formed in
/// 128-bit arithmetic; a result that does not fit back into 64 bits throws
/// std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by intent
  Rational(std::int64_t numerator, std::int64_t denominator);

  /// Parses "p", "-p" or "p/q".
  static Rational parse(std::string_view text);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::string to_string() const;

 private:
  static Rational from_wide(__int128 numerator, __int128 denominator);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational midpoint(const Rational& a, const Rational& b);
Rational abs(const Rational& r);

}  // namespace premeasure

template <>
struct std::hash<premeasure::Rational> {
  std::size_t operator()(const premeasure::Rational& r) const noexcept {
    auto h = std::hash<std::int64_t>{}(r.numerator());
    return h ^ (std::hash<std::int64_t>{}(r.denominator()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};
