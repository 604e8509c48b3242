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
#include <cstdint>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace premeasure {

using BigInt = boost::multiprecision::cpp_int;

/// Exact nonnegative dyadic rational mantissa / 2^scale.
///
/// Canonical form: mantissa odd, or mantissa zero with scale zero. Mantissa
/// precision is unbounded; a stage-k construction produces scales up to k.
class DyadicMass {
 public:
  DyadicMass() = default;
  DyadicMass(BigInt mantissa, std::uint64_t scale);

  static DyadicMass zero() { return {}; }
  static DyadicMass one() { return {1, 0}; }
  /// 2^(-k).
  static DyadicMass pow2_neg(std::uint64_t k) { return {1, k}; }

  const BigInt& mantissa() const { return mantissa_; }
  std::uint64_t scale() const { return scale_; }
  bool is_zero() const { return mantissa_.is_zero(); }
  /// True when the value is 2^(-scale).
  bool is_unit_fraction() const { return mantissa_ == 1; }

  DyadicMass half() const;
  friend DyadicMass operator+(const DyadicMass& a, const DyadicMass& b);
  /// Throws std::domain_error when b > a.
  friend DyadicMass operator-(const DyadicMass& a, const DyadicMass& b);
  DyadicMass& operator+=(const DyadicMass& o) { return *this = *this + o; }

  friend bool operator==(const DyadicMass& a, const DyadicMass& b) = default;
  friend std::strong_ordering operator<=>(const DyadicMass& a, const DyadicMass& b);

  /// "0", "1", or "m/2^s".
  std::string to_string() const;

 private:
  BigInt mantissa_ = 0;
  std::uint64_t scale_ = 0;
};

/// Bulk exact summation. Unit fractions are binned by exponent and carried once
/// at the end, so summing n cell masses costs O(n log n + max scale / 64).
class DyadicSum {
 public:
  void add(const DyadicMass& m);
  DyadicMass value() const;
  std::size_t terms() const { return terms_; }

 private:
  std::map<std::uint64_t, std::uint64_t> unit_bins_;
  DyadicMass general_;
  std::size_t terms_ = 0;
};

}  // namespace premeasure
