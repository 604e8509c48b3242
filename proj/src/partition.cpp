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

#include "premeasure/detail/partition.hpp"

#include <algorithm>
#include <utility>

#include "premeasure/errors.hpp"

namespace premeasure::detail {

CellId PiecePartition::fresh(std::uint32_t exponent) {
  exponent_.push_back(exponent);
  piece_count_.push_back(0);
  ++live_cells_;
  return static_cast<CellId>(exponent_.size() - 1);
}

void PiecePartition::split_at(const Rational& x) {
  auto it = pieces_.upper_bound(x);
  if (it == pieces_.begin()) return;
  --it;
  if (!(it->first < x) || !(x < it->second.hi)) return;
  PieceTail right{it->second.hi, it->second.cell};
  it->second.hi = x;
  pieces_.emplace_hint(std::next(it), x, right);
  ++piece_count_[right.cell];
}

RefineDelta PiecePartition::refine(const Interval& run, std::uint64_t stage) {
  if (!(run.lo < run.hi)) throw Error(ErrorCode::kPreconditionViolation, "empty run");
  split_at(run.lo);
  split_at(run.hi);

  RefineDelta delta;
  std::vector<std::pair<CellId, std::map<Rational, PieceTail>::iterator>> inside;
  std::vector<Interval> gaps;
  Rational cursor = run.lo;
  for (auto it = pieces_.lower_bound(run.lo); it != pieces_.end() && it->first < run.hi; ++it) {
    if (cursor < it->first) gaps.push_back({cursor, it->first});
    cursor = it->second.hi;
    inside.emplace_back(it->second.cell, it);
  }
  if (cursor < run.hi) gaps.push_back({cursor, run.hi});
  delta.touched_pieces = inside.size();

  std::stable_sort(inside.begin(), inside.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < inside.size();) {
    std::size_t j = i;
    const CellId c = inside[i].first;
    while (j < inside.size() && inside[j].first == c) ++j;
    const auto count = static_cast<std::uint32_t>(j - i);
    if (count == piece_count_[c]) {
      delta.persisted_inside.push_back(c);
    } else {
      const std::uint32_t parent_exponent = exponent_[c];
      ++exponent_[c];
      CellId child = fresh(exponent_[c]);
      for (std::size_t q = i; q < j; ++q) inside[q].second->second.cell = child;
      piece_count_[child] = count;
      piece_count_[c] -= count;
      delta.splits.push_back({c, child, parent_exponent});
    }
    i = j;
  }

  if (!gaps.empty()) {
    CellId cell = fresh(static_cast<std::uint32_t>(stage));
    for (const auto& g : gaps) pieces_.emplace(g.lo, PieceTail{g.hi, cell});
    piece_count_[cell] = static_cast<std::uint32_t>(gaps.size());
    delta.new_region = cell;
  }
  return delta;
}

PiecePartition PiecePartition::from_pieces(const std::vector<Piece>& pieces, std::vector<std::uint32_t> exponents) {
  PiecePartition out;
  out.piece_count_.assign(exponents.size(), 0);
  out.exponent_ = std::move(exponents);
  out.live_cells_ = out.exponent_.size();
  for (const auto& p : pieces) {
    out.pieces_.emplace_hint(out.pieces_.end(), p.lo, PieceTail{p.hi, p.cell});
    ++out.piece_count_[p.cell];
  }
  return out;
}

std::optional<Piece> PiecePartition::locate_closure(const Interval& run, SpaceKind kind) const {
  auto it = pieces_.upper_bound(run.lo);
  if (it == pieces_.begin()) return std::nullopt;
  --it;
  const Rational& lo = it->first;
  const Rational& hi = it->second.hi;
  if (kind == SpaceKind::kRationalLine) {
    if (!(lo < run.lo) || !(run.hi < hi)) return std::nullopt;
  } else {
    if (!(lo <= run.lo) || !(run.hi <= hi)) return std::nullopt;
    if (lo == run.lo && hi == run.hi && piece_count_[it->second.cell] == 1) return std::nullopt;
  }
  return Piece{lo, hi, it->second.cell};
}

bool PiecePartition::has_breakpoint_in(const Rational& lo, const Rational& hi) const {
  auto it = pieces_.lower_bound(lo);
  if (it != pieces_.end() && it->first <= hi) return true;
  if (it == pieces_.begin()) return false;
  --it;
  return lo <= it->second.hi && it->second.hi <= hi;
}

}  // namespace premeasure::detail
