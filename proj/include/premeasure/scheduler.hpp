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
#include <functional>
#include <memory>
#include <vector>

#include "premeasure/space.hpp"
#include "premeasure/stage.hpp"

namespace premeasure {

/// One block R_{i,j} = (F, G, H) covering the index range (lo, g].
struct ScheduleBlock {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  std::vector<std::uint64_t> F;  // holes, one per cell present before the block
  std::vector<std::uint64_t> G;  // cover of the boundary of V_i
  std::vector<std::uint64_t> H;  // the rest of the range
  std::uint64_t lo = 0;
  std::uint64_t g = 0;
  std::size_t cells_before = 0;
  std::size_t cells_after = 0;
  DyadicMass max_mass_after;
};

struct Schedule {
  Space space = Space::cantor();
  std::uint64_t depth = 0;
  std::vector<ScheduleBlock> blocks;   // diagonal order
  std::vector<std::uint64_t> stream;   // stream[p-1] = π(p)
  std::vector<std::uint64_t> position;  // position[k] = p with π(p) = k, for k <= g

  const ScheduleBlock& block(std::uint64_t i, std::uint64_t j) const;
  bool has_block(std::uint64_t i, std::uint64_t j) const;
  std::uint64_t last_g() const { return blocks.empty() ? 0 : blocks.back().g; }
  /// Union of the G_{i,j} regions.
  OpenRegion cover_region(std::uint64_t i, std::uint64_t j) const;
  /// Runs of the F_{i,j} holes, sorted.
  std::vector<Interval> hole_runs(std::uint64_t i, std::uint64_t j) const;
};

using ScheduleProgress = std::function<void(const ScheduleBlock&)>;

struct ScheduleRun {
  Schedule schedule;
  std::shared_ptr<Trace> trace;
};

/// Builds every block of the diagonals i + j <= depth + 1 and the stage trace
/// of the permuted stream.
ScheduleRun build_schedule(const Space& space, std::uint64_t depth, std::uint64_t scan_cap = kDefaultScanCap,
                           const ScheduleProgress& progress = nullptr);

RingElement cover_union(const Schedule& schedule, std::uint64_t i, std::uint64_t j, const Stage& stage);

std::vector<BasisHandle> permuted_stream(const Schedule& schedule);

}  // namespace premeasure
