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

#include "premeasure/dyadic.hpp"

#include <stdexcept>
#include <vector>

namespace premeasure {

DyadicMass::DyadicMass(BigInt mantissa, std::uint64_t scale) : mantissa_(std::move(mantissa)), scale_(scale) {
  if (mantissa_ < 0) throw std::domain_error("negative dyadic mass");
  if (mantissa_.is_zero()) {
    scale_ = 0;
    return;
  }
  std::uint64_t tz = boost::multiprecision::lsb(mantissa_);
  if (tz > scale_) tz = scale_;
  if (tz > 0) {
    mantissa_ >>= tz;
    scale_ -= tz;
  }
}

DyadicMass DyadicMass::half() const {
  if (is_zero()) return {};
  return {mantissa_, scale_ + 1};
}

DyadicMass operator+(const DyadicMass& a, const DyadicMass& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.scale_ >= b.scale_) return {a.mantissa_ + (b.mantissa_ << (a.scale_ - b.scale_)), a.scale_};
  return {(a.mantissa_ << (b.scale_ - a.scale_)) + b.mantissa_, b.scale_};
}

DyadicMass operator-(const DyadicMass& a, const DyadicMass& b) {
  if (b > a) throw std::domain_error("dyadic subtraction would go negative");
  if (b.is_zero()) return a;
  if (a.scale_ >= b.scale_) return {a.mantissa_ - (b.mantissa_ << (a.scale_ - b.scale_)), a.scale_};
  return {(a.mantissa_ << (b.scale_ - a.scale_)) - b.mantissa_, b.scale_};
}

std::strong_ordering operator<=>(const DyadicMass& a, const DyadicMass& b) {
  if (a.scale_ == b.scale_) {
    if (a.mantissa_ < b.mantissa_) return std::strong_ordering::less;
    if (a.mantissa_ > b.mantissa_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  BigInt lhs = a.scale_ > b.scale_ ? a.mantissa_ : BigInt(a.mantissa_ << (b.scale_ - a.scale_));
  BigInt rhs = b.scale_ > a.scale_ ? b.mantissa_ : BigInt(b.mantissa_ << (a.scale_ - b.scale_));
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string DyadicMass::to_string() const {
  if (scale_ == 0) return mantissa_.str();
  return mantissa_.str() + "/2^" + std::to_string(scale_);
}

void DyadicSum::add(const DyadicMass& m) {
  ++terms_;
  if (m.is_zero()) return;
  if (m.is_unit_fraction()) {
    ++unit_bins_[m.scale()];
  } else {
    general_ += m;
  }
}

DyadicMass DyadicSum::value() const {
  if (unit_bins_.empty()) return general_;
  const std::uint64_t top = unit_bins_.rbegin()->first;
  // bit (top - e) of the mantissa receives count_e; one guard word for carries.
  std::vector<std::uint64_t> words(top / 64 + 3, 0);
  for (const auto& [e, count] : unit_bins_) {
    std::uint64_t bit = top - e;
    std::size_t w = bit / 64;
    unsigned shift = bit % 64;
    unsigned __int128 add = static_cast<unsigned __int128>(count) << shift;
    while (add != 0) {
      unsigned __int128 sum = static_cast<unsigned __int128>(words[w]) + static_cast<std::uint64_t>(add);
      words[w] = static_cast<std::uint64_t>(sum);
      add = (add >> 64) + (sum >> 64);
      ++w;
    }
  }
  BigInt mantissa;
  boost::multiprecision::import_bits(mantissa, words.rbegin(), words.rend(), 64, true);
  return DyadicMass(std::move(mantissa), top) + general_;
}

}  // namespace premeasure
