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
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "premeasure/detail/partition.hpp"
#include "premeasure/dyadic.hpp"
#include "premeasure/region.hpp"
#include "premeasure/space.hpp"

namespace premeasure {

using CellId = detail::CellId;

/// One flag per inserted set: 'I' (inside) or 'E' (exterior).
struct CellSignature {
  std::string flags;

  friend bool operator==(const CellSignature&, const CellSignature&) = default;
  friend auto operator<=>(const CellSignature&, const CellSignature&) = default;
};

enum class OriginKind { kRoot, kPersisted, kSplit, kNewRegion };

std::string_view origin_kind_name(OriginKind kind);

/// How a cell of stage k arose from stage k-1. `parent` is a stage-(k-1) cell
/// id for kPersisted and kSplit.
struct CellOrigin {
  OriginKind kind = OriginKind::kRoot;
  CellId parent = 0;
  std::uint64_t stage = 0;
};

struct CellView {
  CellId id = 0;
  CellSignature signature;
  OpenRegion region;
  DyadicMass mass;
  CellOrigin origin;
};

/// Append-only insertion stream shared by a trace and its snapshots.
using Stream = std::deque<BasisHandle>;

class StageBuilder;

/// Immutable state after k insertions.
///
/// Cell ids are stable across stages: a cell keeps its id while it persists,
/// and when it splits the exterior part keeps the id and the inside part gets
/// a fresh one. Ids are therefore only meaningful together with a stage index.
class Stage {
 public:
  std::uint64_t index() const { return index_; }
  SpaceKind kind() const { return kind_; }

  const BasisHandle& inserted(std::uint64_t position) const;  // 1-based, <= index()
  std::vector<BasisHandle> inserted_handles() const;

  std::size_t cell_count() const { return exponent_.size(); }
  bool has_cell(CellId c) const { return c < exponent_.size(); }
  std::uint32_t exponent(CellId c) const;
  DyadicMass mass(CellId c) const { return DyadicMass::pow2_neg(exponent(c)); }
  CellOrigin origin(CellId c) const;
  OpenRegion region(CellId c) const;
  std::span<const std::uint32_t> piece_indices(CellId c) const;
  CellSignature signature(CellId c) const;
  std::optional<CellId> find(const CellSignature& sig) const;
  CellView view(CellId c) const;
  std::vector<CellView> cells() const;

  std::optional<CellId> cell_at(const Rational& point) const;
  const std::vector<detail::Piece>& pieces() const { return pieces_; }

  /// Endpoints of W_1..W_k (line); empty for Cantor space.
  BoundaryDescriptor boundary_support() const;
  bool on_boundary_support(const Rational& point) const;

  /// Stages that granted a root or new region.
  const std::vector<std::uint64_t>& grants() const { return grants_; }
  /// Σ_{m in grants} 2^(-m).
  DyadicMass total_mass() const;
  /// Independent re-summation over all cells.
  DyadicMass cell_mass_sum() const;
  std::uint32_t min_exponent() const { return min_exponent_; }

 private:
  friend class StageBuilder;
  Stage() = default;

  std::uint64_t index_ = 0;
  SpaceKind kind_ = SpaceKind::kRationalLine;
  std::shared_ptr<const Stream> stream_;
  std::vector<detail::Piece> pieces_;
  std::vector<std::uint32_t> exponent_;
  std::vector<std::uint32_t> piece_offset_;  // CSR into piece_index_
  std::vector<std::uint32_t> piece_index_;
  std::vector<std::uint64_t> changed_at_;
  std::vector<OriginKind> change_kind_;
  std::vector<CellId> change_parent_;
  std::vector<std::uint64_t> grants_;
  std::vector<Rational> support_;
  std::uint32_t min_exponent_ = 0;
};

using StagePtr = std::shared_ptr<const Stage>;

enum class Classification { kPersistExterior, kPersistInside, kSplit };

struct ClassifyResult {
  Classification kind = Classification::kPersistExterior;
  OpenRegion in_region;
  OpenRegion ext_region;
};

/// What one insertion did; masses are recomputed exactly from the parts.
struct RefineReport {
  std::uint64_t stage = 0;
  std::uint64_t basis_index = 0;
  std::size_t splits = 0;
  std::size_t persisted_inside = 0;
  bool new_region = false;
  std::size_t cells_after = 0;
  std::uint32_t min_exponent_after = 0;
  DyadicMass split_parent_sum;
  DyadicMass split_children_sum;
  DyadicMass grant;
};

/// Mutable engine behind refine. Not thread-safe.
class StageBuilder {
 public:
  explicit StageBuilder(SpaceKind kind, std::shared_ptr<Stream> stream = nullptr);
  static StageBuilder resume(const Stage& stage, std::shared_ptr<Stream> stream);

  std::uint64_t index() const { return index_; }
  SpaceKind kind() const { return kind_; }
  const detail::PiecePartition& partition() const { return part_; }
  const std::shared_ptr<Stream>& stream() const { return stream_; }

  /// Inserts v as W_{k+1}. Appends v to the stream unless it is already at
  /// position k+1 (replay).
  RefineReport refine(const BasisHandle& v);
  StagePtr snapshot() const;

 private:
  SpaceKind kind_;
  std::shared_ptr<Stream> stream_;
  detail::PiecePartition part_;
  std::uint64_t index_ = 0;
  std::unordered_set<std::uint64_t> used_;
  std::vector<std::uint64_t> changed_at_;
  std::vector<OriginKind> change_kind_;
  std::vector<CellId> change_parent_;
  std::vector<std::uint64_t> grants_;
  std::vector<std::uint64_t> exponent_histogram_;
  std::uint32_t min_exponent_ = 0;
};

/// Stage sequence under an insertion stream. Keeps snapshots at every early
/// stage and then at geometrically spaced stages; other stages are rebuilt on
/// demand from the nearest earlier snapshot.
class Trace {
 public:
  explicit Trace(SpaceKind kind);

  SpaceKind kind() const { return builder_.kind(); }
  std::uint64_t size() const { return builder_.index(); }
  const RefineReport& append(const BasisHandle& v);
  StagePtr stage(std::uint64_t k) const;
  StagePtr last() const { return stage(size()); }
  const std::vector<RefineReport>& reports() const { return reports_; }
  const StageBuilder& head() const { return builder_; }
  std::vector<std::uint64_t> checkpoint_indices() const;

 private:
  StageBuilder builder_;
  std::vector<RefineReport> reports_;
  std::vector<StagePtr> checkpoints_;
  mutable std::mutex cache_mu_;
  mutable std::vector<StagePtr> cache_;
  mutable StagePtr head_snapshot_;
};

/// Element D = B ⊎ C of the stage-n ring: whole cells plus finitely many
/// boundary points.
struct RingElement {
  std::uint64_t stage = 0;
  std::vector<CellId> cells;    // sorted, distinct
  std::vector<Rational> points;  // sorted, distinct, on the boundary support

  bool is_empty() const { return cells.empty() && points.empty(); }
  friend bool operator==(const RingElement&, const RingElement&) = default;
};

StagePtr init_stage(const BasisHandle& v1);
StagePtr refine(const Stage& stage, const BasisHandle& v);
ClassifyResult classify(const Stage& stage, CellId cell, const BasisHandle& v);

RingElement decompose(const OpenRegion& region, const Stage& stage);
RingElement ring_union(const RingElement& d1, const RingElement& d2);
RingElement ring_difference(const RingElement& d1, const RingElement& d2);
/// Union of the cells of d as an open region.
OpenRegion open_region(const RingElement& d, const Stage& stage);
bool ring_contains(const RingElement& d, const Stage& stage, const Rational& point);
/// Re-expresses d (built at `from`) at the later stage `to`.
RingElement lift(const RingElement& d, const Stage& from, const Stage& to);

}  // namespace premeasure
