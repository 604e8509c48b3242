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

#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "premeasure/errors.hpp"
#include "premeasure/scheduler.hpp"
#include "test_support.hpp"

using namespace premeasure;
using premeasure::testing::error_of;

namespace {

const ScheduleRun& line_run() {
  static const ScheduleRun r = build_schedule(Space::rational_line(), 3);
  return r;
}

const ScheduleRun& cantor_run() {
  static const ScheduleRun r = build_schedule(Space::cantor(), 4);
  return r;
}

void check_structure(const ScheduleRun& run) {
  const Schedule& s = run.schedule;
  REQUIRE(run.trace->size() == s.last_g());

  // Diagonal order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> order;
  for (std::uint64_t d = 2; d <= s.depth + 1; ++d) {
    for (std::uint64_t j = 1; j < d; ++j) order.emplace_back(d - j, j);
  }
  REQUIRE(order.size() == s.blocks.size());

  std::uint64_t prev_g = 0;
  std::uint64_t prev_g_max = 0;
  for (std::size_t b = 0; b < s.blocks.size(); ++b) {
    const auto& blk = s.blocks[b];
    CAPTURE(blk.i);
    CAPTURE(blk.j);
    CHECK(std::pair(blk.i, blk.j) == order[b]);
    // (d) and (e): contiguous, exhaustive, increasing.
    CHECK(blk.lo == prev_g);
    CHECK(blk.g >= blk.lo);
    if (s.space.kind() == SpaceKind::kRationalLine) CHECK(blk.g > blk.lo);
    std::vector<std::uint64_t> all;
    all.insert(all.end(), blk.F.begin(), blk.F.end());
    all.insert(all.end(), blk.G.begin(), blk.G.end());
    all.insert(all.end(), blk.H.begin(), blk.H.end());
    std::sort(all.begin(), all.end());
    std::vector<std::uint64_t> range(blk.g - blk.lo);
    std::iota(range.begin(), range.end(), blk.lo + 1);
    CHECK(all == range);
    if (!blk.G.empty()) {
      CHECK(blk.G.front() > prev_g_max);
      prev_g_max = blk.G.back();
    }
    prev_g = blk.g;

    // Holes go in first, then the rest ascending.
    std::vector<std::uint64_t> expect(blk.F.begin(), blk.F.end());
    std::vector<std::uint64_t> rest(blk.G.begin(), blk.G.end());
    rest.insert(rest.end(), blk.H.begin(), blk.H.end());
    std::sort(rest.begin(), rest.end());
    expect.insert(expect.end(), rest.begin(), rest.end());
    CHECK(std::vector<std::uint64_t>(s.stream.begin() + static_cast<std::ptrdiff_t>(blk.lo),
                                     s.stream.begin() + static_cast<std::ptrdiff_t>(blk.g)) == expect);

    if (blk.j == 1) {
      CHECK(blk.F.empty());
      continue;
    }
    // (c): every cell present before the block holds exactly one hole closure.
    const auto before = run.trace->stage(blk.lo);
    REQUIRE(blk.F.size() == before->cell_count());
    std::vector<int> hits(blk.F.size(), 0);
    for (const auto& cell : before->cells()) {
      int inside = 0;
      for (std::size_t h = 0; h < blk.F.size(); ++h) {
        if (closure_strictly_inside(s.space.enumerate(blk.F[h]).region, cell.region)) {
          ++inside;
          ++hits[h];
        }
      }
      CHECK(inside == 1);
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int n) { return n == 1; }));
  }

  // Bijection on 1..g.
  std::vector<std::uint64_t> sorted = s.stream;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> range(s.last_g());
  std::iota(range.begin(), range.end(), 1);
  CHECK(sorted == range);
  for (std::uint64_t p = 1; p <= s.last_g(); ++p) CHECK(s.position[s.stream[p - 1]] == p);

  const auto handles = permuted_stream(s);
  REQUIRE(handles.size() == s.stream.size());
  for (std::size_t p = 0; p < handles.size(); ++p) {
    CHECK(handles[p].index == s.stream[p]);
    CHECK(run.trace->head().stream()->at(p) == handles[p]);
  }
}

}  // namespace

TEST_CASE("cantor schedule has empty covers") {
  const auto& run = cantor_run();
  check_structure(run);
  const auto last = run.trace->last();
  for (const auto& blk : run.schedule.blocks) {
    CHECK(blk.G.empty());
    CHECK(cover_union(run.schedule, blk.i, blk.j, *last).is_empty());
  }
}

TEST_CASE("line schedule at depth 2") {
  const auto run = build_schedule(Space::rational_line(), 2);
  const auto& s = run.schedule;
  REQUIRE(s.blocks.size() == 3);
  CHECK(s.has_block(1, 1));
  CHECK(s.has_block(2, 1));
  CHECK(s.has_block(1, 2));
  CHECK_FALSE(s.has_block(3, 1));
  CHECK(s.block(2, 1).G.front() > s.block(1, 1).g);
  CHECK(error_of([&] { s.block(1, 3); }) == ErrorCode::kInsufficientDepth);
}

TEST_CASE("line schedule at depth 3: properties (a) to (e)") {
  const auto& run = line_run();
  const Schedule& s = run.schedule;
  check_structure(run);
  const auto last = run.trace->last();
  for (const auto& blk : s.blocks) {
    CAPTURE(blk.i);
    CAPTURE(blk.j);
    const auto boundary = s.space.boundary(s.space.enumerate(blk.i));
    const OpenRegion cover = s.cover_region(blk.i, blk.j);
    // (a)
    for (const auto& p : boundary.points) CHECK(cover.contains(p));
    // (b)
    if (blk.j >= 2) {
      const auto holes = s.hole_runs(blk.i, blk.j);
      CHECK(is_subset(cover, minus_closures(s.cover_region(blk.i, blk.j - 1), holes)));
      for (const auto& h : holes) CHECK(is_disjoint(cover, OpenRegion::interval(h.lo, h.hi)));
    }
    // cover_union at the last stage contains the boundary.
    const auto d = cover_union(s, blk.i, blk.j, *last);
    for (const auto& p : boundary.points) CHECK(ring_contains(d, *last, p));
    for (std::int64_t k = -400; k <= 400; ++k) {
      const Rational x(k, 81);
      if (cover.contains(x)) CHECK(ring_contains(d, *last, x));
    }
  }
}

TEST_CASE("cover_union needs the block inserted") {
  const auto& run = line_run();
  const auto& blk = run.schedule.block(1, 1);
  std::uint64_t latest = 0;
  for (auto k : blk.G) latest = std::max(latest, run.schedule.position[k]);
  REQUIRE(latest > 1);
  CHECK(error_of([&] { cover_union(run.schedule, 1, 1, *run.trace->stage(latest - 1)); }) ==
        ErrorCode::kStageTooEarly);
  CHECK_NOTHROW(cover_union(run.schedule, 1, 1, *run.trace->stage(latest)));
}

TEST_CASE("depth-1 schedule streams R11 ascending") {
  const auto run = build_schedule(Space::rational_line(), 1);
  const auto& blk = run.schedule.block(1, 1);
  const auto handles = permuted_stream(run.schedule);
  REQUIRE(handles.size() == blk.g);
  for (std::size_t p = 0; p < handles.size(); ++p) CHECK(handles[p].index == p + 1);
}
