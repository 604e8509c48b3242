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

#include "premeasure/scheduler.hpp"

#include <algorithm>

#include "premeasure/errors.hpp"
#include "premeasure/mass.hpp"

namespace premeasure {

namespace {

bool open_contains(const Interval& iv, const Rational& x) { return iv.lo < x && x < iv.hi; }

// Smallest indices >= min_index, one per point not yet covered, whose run
// contains the point and passes `admissible`.
std::vector<std::uint64_t> cover_points(const Space& space, const std::vector<Rational>& points,
                                        const std::function<bool(const Interval&)>& admissible,
                                        const std::vector<std::uint64_t>& forbidden, std::uint64_t min_index,
                                        std::uint64_t scan_cap) {
  std::vector<std::uint64_t> out;
  std::vector<Interval> chosen;
  for (const auto& p : points) {
    if (std::any_of(chosen.begin(), chosen.end(), [&](const Interval& iv) { return open_contains(iv, p); })) continue;
    bool found = false;
    for (std::uint64_t idx = min_index; idx < min_index + scan_cap; ++idx) {
      if (std::binary_search(forbidden.begin(), forbidden.end(), idx)) continue;
      const Interval iv = space.run(idx);
      if (!open_contains(iv, p) || !admissible(iv)) continue;
      out.push_back(idx);
      chosen.push_back(iv);
      found = true;
      break;
    }
    if (!found) {
      throw Error(ErrorCode::kScanExhausted, "no cover set for " + p.to_string() + " within " + std::to_string(scan_cap) + " indices");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// One hole per current cell: a single ascending scan assigns each candidate
// to the cell whose piece holds its closure, if that cell has none yet.
std::vector<std::uint64_t> bore_holes(const Space& space, const detail::PiecePartition& part, std::uint64_t min_index,
                                      std::uint64_t scan_cap) {
  std::vector<bool> has_hole(part.id_count(), false);
  std::size_t missing = part.cell_count();
  std::vector<std::uint64_t> out;
  for (std::uint64_t idx = min_index; missing > 0; ++idx) {
    if (idx >= min_index + scan_cap) {
      throw Error(ErrorCode::kScanExhausted, std::to_string(missing) + " cells still without a hole after " + std::to_string(scan_cap) + " indices");
    }
    const auto piece = part.locate_closure(space.run(idx), space.kind());
    if (!piece || has_hole[piece->cell]) continue;
    has_hole[piece->cell] = true;
    --missing;
    out.push_back(idx);
  }
  return out;
}

}  // namespace

const ScheduleBlock& Schedule::block(std::uint64_t i, std::uint64_t j) const {
  for (const auto& b : blocks) {
    if (b.i == i && b.j == j) return b;
  }
  throw Error(ErrorCode::kInsufficientDepth, "block (" + std::to_string(i) + "," + std::to_string(j) + ") was not built");
}

bool Schedule::has_block(std::uint64_t i, std::uint64_t j) const {
  return std::any_of(blocks.begin(), blocks.end(), [&](const ScheduleBlock& b) { return b.i == i && b.j == j; });
}

OpenRegion Schedule::cover_region(std::uint64_t i, std::uint64_t j) const {
  std::vector<Interval> parts;
  for (std::uint64_t k : block(i, j).G) parts.push_back(space.run(k));
  return space.kind() == SpaceKind::kRationalLine ? OpenRegion::line(std::move(parts)) : OpenRegion::cantor(std::move(parts));
}

std::vector<Interval> Schedule::hole_runs(std::uint64_t i, std::uint64_t j) const {
  std::vector<Interval> runs;
  for (std::uint64_t k : block(i, j).F) runs.push_back(space.run(k));
  std::sort(runs.begin(), runs.end());
  return runs;
}

ScheduleRun build_schedule(const Space& space, std::uint64_t depth, std::uint64_t scan_cap, const ScheduleProgress& progress) {
  if (depth == 0) throw Error(ErrorCode::kPreconditionViolation, "depth must be at least 1");
  ScheduleRun run{Schedule{space, depth, {}, {}, {0}}, std::make_shared<Trace>(space.kind())};
  Schedule& sched = run.schedule;
  Trace& trace = *run.trace;
  std::uint64_t g = 0;

  for (std::uint64_t diag = 2; diag <= depth + 1; ++diag) {
    for (std::uint64_t j = 1; j < diag; ++j) {
      const std::uint64_t i = diag - j;
      ScheduleBlock b;
      b.i = i;
      b.j = j;
      b.lo = g;
      b.cells_before = trace.head().partition().cell_count();
      const std::vector<Rational> points = space.boundary(space.enumerate(i)).points;

      if (j == 1) {
        b.G = cover_points(space, points, [](const Interval&) { return true; }, {}, g + 1, scan_cap);
      } else {
        b.F = bore_holes(space, trace.head().partition(), g + 1, scan_cap);
        std::vector<Interval> holes;
        for (std::uint64_t k : b.F) holes.push_back(space.run(k));
        std::sort(holes.begin(), holes.end());
        const OpenRegion constraint = minus_closures(sched.cover_region(i, j - 1), holes);
        for (const auto& p : points) {
          if (!constraint.contains(p)) {
            throw Error(ErrorCode::kInfeasibleCover, "boundary point " + p.to_string() + " of V_" + std::to_string(i) +
                                                         " escapes " + constraint.to_string());
          }
        }
        const auto constrained = [&](const Interval& iv) {
          return is_subset(space.kind() == SpaceKind::kRationalLine ? OpenRegion::line({iv}) : OpenRegion::cantor({iv}), constraint);
        };
        b.G = cover_points(space, points, constrained, b.F, g + 1, scan_cap);
      }

      std::uint64_t top = j == 1 ? std::max(g, i) : g;
      if (!b.F.empty()) top = std::max(top, b.F.back());
      if (!b.G.empty()) top = std::max(top, b.G.back());
      b.g = top;
      for (std::uint64_t k = g + 1; k <= top; ++k) {
        if (!std::binary_search(b.F.begin(), b.F.end(), k) && !std::binary_search(b.G.begin(), b.G.end(), k)) b.H.push_back(k);
      }

      std::vector<std::uint64_t> order = b.F;
      for (std::uint64_t k = g + 1; k <= top; ++k) {
        if (!std::binary_search(b.F.begin(), b.F.end(), k)) order.push_back(k);
      }
      sched.position.resize(top + 1, 0);
      for (std::uint64_t k : order) {
        trace.append(space.enumerate(k));
        sched.stream.push_back(k);
        sched.position[k] = sched.stream.size();
      }
      g = top;
      b.cells_after = trace.head().partition().cell_count();
      b.max_mass_after = DyadicMass::pow2_neg(trace.head().partition().cell_count() ? trace.reports().back().min_exponent_after : 0);
      sched.blocks.push_back(std::move(b));
      if (progress) progress(sched.blocks.back());
    }
  }
  return run;
}

RingElement cover_union(const Schedule& schedule, std::uint64_t i, std::uint64_t j, const Stage& stage) {
  for (std::uint64_t k : schedule.block(i, j).G) {
    if (schedule.position[k] > stage.index()) {
      throw Error(ErrorCode::kStageTooEarly, "cover set V_" + std::to_string(k) + " enters at stage " +
                                                 std::to_string(schedule.position[k]) + ", after stage " + std::to_string(stage.index()));
    }
  }
  return decompose(schedule.cover_region(i, j), stage);
}

std::vector<BasisHandle> permuted_stream(const Schedule& schedule) {
  std::vector<BasisHandle> out;
  out.reserve(schedule.stream.size());
  for (std::uint64_t k : schedule.stream) out.push_back(schedule.space.enumerate(k));
  return out;
}

}  // namespace premeasure
