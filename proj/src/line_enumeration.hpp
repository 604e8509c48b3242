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

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "premeasure/detail/partition.hpp"
#include "premeasure/region.hpp"

namespace premeasure {

struct IntervalHash {
  std::size_t operator()(const Interval& iv) const noexcept {
    std::size_t h = std::hash<Rational>{}(iv.lo);
    return h ^ (std::hash<Rational>{}(iv.hi) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

/// Lazily grown canonical table of the rational line (see Space).
class LineEnumeration {
 public:
  static constexpr std::uint64_t kMaxEntries = 4'000'000;

  static std::shared_ptr<LineEnumeration> shared();

  Interval at(std::uint64_t index);
  /// Canonical index of a run; throws NotABasisElement or ScanExhausted.
  std::uint64_t index_of(const Interval& run);
  std::uint32_t rank_of_entry(std::uint64_t index);

 private:
  void grow_locked();
  void push_locked(const Interval& iv);

  std::mutex mu_;
  std::vector<Interval> entries_{Interval{}};  // 1-based
  std::vector<std::uint32_t> ranks_{0};
  std::unordered_map<Interval, std::uint64_t, IntervalHash> index_;
  detail::PiecePartition atoms_;
  std::uint32_t next_rank_ = 0;
};

}  // namespace premeasure
