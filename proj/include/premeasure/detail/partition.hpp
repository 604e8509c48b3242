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
#include <map>
#include <optional>
#include <vector>

#include "premeasure/rational.hpp"
#include "premeasure/region.hpp"

namespace premeasure::detail {

using CellId = std::uint32_t;

struct PieceTail {
  Rational hi;
  CellId cell;
};

struct Piece {
  Rational lo;
  Rational hi;
  CellId cell;
};

/// Outcome of inserting one run into a partition.
struct RefineDelta {
  struct Split {
    CellId parent;  // keeps its id as the exterior child
    CellId inside;  // fresh id
    std::uint32_t parent_exponent;
  };
  std::vector<Split> splits;
  std::vector<CellId> persisted_inside;
  std::optional<CellId> new_region;
  std::size_t touched_pieces = 0;
};

/// Covered part of the space cut into maximal runs ("pieces"), each labelled
/// with the cell it belongs to. Points not under any piece are uncovered, or
/// on the line possibly boundary points between two touching pieces.
///
/// Every cell has mass 2^(-exponent). Two pieces of the same cell never touch:
/// their shared endpoint would be an endpoint of an inserted run with the two
/// sides on different sides of it.
class PiecePartition {
 public:
  /// Inserts the run [lo, hi) (Cantor) or (lo, hi) (line); `stage` is the
  /// stage index after insertion, which fixes the exponent of a new region.
  RefineDelta refine(const Interval& run, std::uint64_t stage);

  /// Rebuilds a partition from sorted pieces and per-cell exponents.
  static PiecePartition from_pieces(const std::vector<Piece>& pieces, std::vector<std::uint32_t> exponents);

  /// Piece whose interior holds the closure of `run`; nullopt if none.
  std::optional<Piece> locate_closure(const Interval& run, SpaceKind kind) const;
  /// True when some piece endpoint lies in the closed interval [lo, hi].
  bool has_breakpoint_in(const Rational& lo, const Rational& hi) const;

  const std::map<Rational, PieceTail>& pieces() const { return pieces_; }
  std::size_t cell_count() const { return live_cells_; }
  std::size_t id_count() const { return exponent_.size(); }
  std::uint32_t exponent(CellId c) const { return exponent_[c]; }
  std::uint32_t piece_count(CellId c) const { return piece_count_[c]; }

 private:
  void split_at(const Rational& x);
  CellId fresh(std::uint32_t exponent);

  std::map<Rational, PieceTail> pieces_;
  std::vector<std::uint32_t> exponent_;
  std::vector<std::uint32_t> piece_count_;
  std::size_t live_cells_ = 0;
};

}  // namespace premeasure::detail
