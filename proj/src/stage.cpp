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

#include "premeasure/stage.hpp"

#include <algorithm>

#include "premeasure/errors.hpp"

namespace premeasure {

std::string_view origin_kind_name(OriginKind kind) {
  switch (kind) {
    case OriginKind::kRoot: return "Root";
    case OriginKind::kPersisted: return "PersistedFrom";
    case OriginKind::kSplit: return "SplitFrom";
    case OriginKind::kNewRegion: return "NewRegion";
  }
  return "?";
}

// ---------------------------------------------------------------- Stage

const BasisHandle& Stage::inserted(std::uint64_t position) const {
  if (position == 0 || position > index_) {
    throw Error(ErrorCode::kPreconditionViolation, "stage " + std::to_string(index_) + " has no W_" + std::to_string(position));
  }
  return (*stream_)[position - 1];
}

std::vector<BasisHandle> Stage::inserted_handles() const {
  return {stream_->begin(), stream_->begin() + static_cast<std::ptrdiff_t>(index_)};
}

std::uint32_t Stage::exponent(CellId c) const {
  if (!has_cell(c)) throw Error(ErrorCode::kUnknownCell, "cell " + std::to_string(c) + " at stage " + std::to_string(index_));
  return exponent_[c];
}

CellOrigin Stage::origin(CellId c) const {
  exponent(c);
  if (changed_at_[c] == index_) return {change_kind_[c], change_parent_[c], index_};
  return {OriginKind::kPersisted, c, index_};
}

std::span<const std::uint32_t> Stage::piece_indices(CellId c) const {
  exponent(c);
  return {piece_index_.data() + piece_offset_[c], piece_index_.data() + piece_offset_[c + 1]};
}

OpenRegion Stage::region(CellId c) const {
  std::vector<Interval> parts;
  for (std::uint32_t q : piece_indices(c)) parts.push_back({pieces_[q].lo, pieces_[q].hi});
  return kind_ == SpaceKind::kRationalLine ? OpenRegion::line(std::move(parts)) : OpenRegion::cantor(std::move(parts));
}

CellSignature Stage::signature(CellId c) const {
  const auto& first = pieces_[piece_indices(c).front()];
  const Rational probe = midpoint(first.lo, first.hi);
  CellSignature sig;
  sig.flags.reserve(index_);
  for (std::uint64_t i = 0; i < index_; ++i) {
    sig.flags.push_back((*stream_)[i].region.contains(probe) ? 'I' : 'E');
  }
  return sig;
}

std::optional<CellId> Stage::find(const CellSignature& sig) const {
  for (CellId c = 0; c < cell_count(); ++c) {
    if (signature(c) == sig) return c;
  }
  return std::nullopt;
}

CellView Stage::view(CellId c) const { return {c, signature(c), region(c), mass(c), origin(c)}; }

std::vector<CellView> Stage::cells() const {
  std::vector<CellView> out;
  out.reserve(cell_count());
  for (CellId c = 0; c < cell_count(); ++c) out.push_back(view(c));
  std::sort(out.begin(), out.end(), [](const CellView& a, const CellView& b) { return a.region.parts() < b.region.parts(); });
  return out;
}

std::optional<CellId> Stage::cell_at(const Rational& point) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), point,
                             [](const Rational& p, const detail::Piece& q) { return p < q.lo; });
  if (it == pieces_.begin()) return std::nullopt;
  --it;
  const bool after_lo = kind_ == SpaceKind::kCantor ? it->lo <= point : it->lo < point;
  if (after_lo && point < it->hi) return it->cell;
  return std::nullopt;
}

BoundaryDescriptor Stage::boundary_support() const { return {kind_, support_}; }

bool Stage::on_boundary_support(const Rational& point) const {
  return std::binary_search(support_.begin(), support_.end(), point);
}

DyadicMass Stage::total_mass() const {
  BigInt mantissa = 0;
  for (std::uint64_t m : grants_) boost::multiprecision::bit_set(mantissa, static_cast<unsigned>(index_ - m));
  return {std::move(mantissa), index_};
}

DyadicMass Stage::cell_mass_sum() const {
  DyadicSum sum;
  for (std::uint32_t e : exponent_) sum.add(DyadicMass::pow2_neg(e));
  return sum.value();
}

// ---------------------------------------------------------------- builder

StageBuilder::StageBuilder(SpaceKind kind, std::shared_ptr<Stream> stream)
    : kind_(kind), stream_(stream ? std::move(stream) : std::make_shared<Stream>()) {}

StageBuilder StageBuilder::resume(const Stage& stage, std::shared_ptr<Stream> stream) {
  StageBuilder b(stage.kind_, std::move(stream));
  b.part_ = detail::PiecePartition::from_pieces(stage.pieces_, stage.exponent_);
  b.index_ = stage.index_;
  for (std::uint64_t i = 0; i < stage.index_; ++i) b.used_.insert((*b.stream_)[i].index);
  b.changed_at_ = stage.changed_at_;
  b.change_kind_ = stage.change_kind_;
  b.change_parent_ = stage.change_parent_;
  b.grants_ = stage.grants_;
  for (std::uint32_t e : stage.exponent_) {
    if (b.exponent_histogram_.size() <= e) b.exponent_histogram_.resize(e + 1, 0);
    ++b.exponent_histogram_[e];
  }
  b.min_exponent_ = stage.min_exponent_;
  return b;
}

RefineReport StageBuilder::refine(const BasisHandle& v) {
  if (v.region.kind() != kind_ || v.region.parts().size() != 1) {
    throw Error(ErrorCode::kPreconditionViolation, "inserted set must be a single basis set of this space");
  }
  if (used_.contains(v.index)) {
    throw Error(ErrorCode::kDuplicateInsertion, "basis index " + std::to_string(v.index) + " already inserted");
  }
  const std::uint64_t k = index_ + 1;
  if (stream_->size() < k) {
    stream_->push_back(v);
  } else if ((*stream_)[k - 1].index != v.index) {
    throw Error(ErrorCode::kPreconditionViolation, "stream already holds a different W_" + std::to_string(k));
  }

  const detail::RefineDelta delta = part_.refine(v.region.parts().front(), k);
  index_ = k;
  used_.insert(v.index);

  const std::size_t ids = part_.id_count();
  changed_at_.resize(ids, 0);
  change_kind_.resize(ids, OriginKind::kPersisted);
  change_parent_.resize(ids, 0);
  auto bump = [&](std::uint32_t e, std::int64_t by) {
    if (exponent_histogram_.size() <= e) exponent_histogram_.resize(e + 1, 0);
    exponent_histogram_[e] = static_cast<std::uint64_t>(static_cast<std::int64_t>(exponent_histogram_[e]) + by);
  };

  RefineReport report;
  report.stage = k;
  report.basis_index = v.index;
  report.splits = delta.splits.size();
  report.persisted_inside = delta.persisted_inside.size();
  DyadicSum parents;
  DyadicSum children;
  for (const auto& s : delta.splits) {
    changed_at_[s.parent] = k;
    change_kind_[s.parent] = OriginKind::kSplit;
    change_parent_[s.parent] = s.parent;
    changed_at_[s.inside] = k;
    change_kind_[s.inside] = OriginKind::kSplit;
    change_parent_[s.inside] = s.parent;
    bump(s.parent_exponent, -1);
    bump(s.parent_exponent + 1, 2);
    parents.add(DyadicMass::pow2_neg(s.parent_exponent));
    children.add(DyadicMass::pow2_neg(part_.exponent(s.parent)));
    children.add(DyadicMass::pow2_neg(part_.exponent(s.inside)));
  }
  report.split_parent_sum = parents.value();
  report.split_children_sum = children.value();
  if (delta.new_region) {
    const CellId c = *delta.new_region;
    changed_at_[c] = k;
    change_kind_[c] = k == 1 ? OriginKind::kRoot : OriginKind::kNewRegion;
    change_parent_[c] = c;
    const std::uint32_t e = part_.exponent(c);
    bump(e, 1);
    grants_.push_back(k);
    report.new_region = true;
    report.grant = DyadicMass::pow2_neg(e);
    if (part_.cell_count() == 1 || e < min_exponent_) min_exponent_ = e;
  }
  while (part_.cell_count() > 0 && exponent_histogram_[min_exponent_] == 0) ++min_exponent_;
  report.cells_after = part_.cell_count();
  report.min_exponent_after = min_exponent_;
  return report;
}

StagePtr StageBuilder::snapshot() const {
  auto s = std::shared_ptr<Stage>(new Stage());
  s->index_ = index_;
  s->kind_ = kind_;
  s->stream_ = stream_;
  const std::size_t ids = part_.id_count();
  s->exponent_.resize(ids);
  for (CellId c = 0; c < ids; ++c) s->exponent_[c] = part_.exponent(c);
  s->pieces_.reserve(part_.pieces().size());
  for (const auto& [lo, tail] : part_.pieces()) s->pieces_.push_back({lo, tail.hi, tail.cell});
  s->piece_offset_.assign(ids + 1, 0);
  for (const auto& p : s->pieces_) ++s->piece_offset_[p.cell + 1];
  for (std::size_t c = 0; c < ids; ++c) s->piece_offset_[c + 1] += s->piece_offset_[c];
  s->piece_index_.resize(s->pieces_.size());
  std::vector<std::uint32_t> fill(s->piece_offset_.begin(), s->piece_offset_.end() - 1);
  for (std::uint32_t q = 0; q < s->pieces_.size(); ++q) s->piece_index_[fill[s->pieces_[q].cell]++] = q;
  s->changed_at_ = changed_at_;
  s->change_kind_ = change_kind_;
  s->change_parent_ = change_parent_;
  s->grants_ = grants_;
  s->min_exponent_ = min_exponent_;
  if (kind_ == SpaceKind::kRationalLine) {
    s->support_.reserve(2 * index_);
    for (std::uint64_t i = 0; i < index_; ++i) {
      const Interval& iv = (*stream_)[i].region.parts().front();
      s->support_.push_back(iv.lo);
      s->support_.push_back(iv.hi);
    }
    std::sort(s->support_.begin(), s->support_.end());
    s->support_.erase(std::unique(s->support_.begin(), s->support_.end()), s->support_.end());
  }
  return s;
}

// ---------------------------------------------------------------- trace

namespace {
constexpr std::uint64_t kDenseCheckpoints = 64;
constexpr std::size_t kReplayCache = 4;
}  // namespace

Trace::Trace(SpaceKind kind) : builder_(kind) {}

const RefineReport& Trace::append(const BasisHandle& v) {
  reports_.push_back(builder_.refine(v));
  const std::uint64_t k = builder_.index();
  const std::uint64_t last = checkpoints_.empty() ? 0 : checkpoints_.back()->index();
  if (k <= kDenseCheckpoints || k >= last + last / 4) checkpoints_.push_back(builder_.snapshot());
  std::lock_guard lock(cache_mu_);
  head_snapshot_.reset();
  return reports_.back();
}

std::vector<std::uint64_t> Trace::checkpoint_indices() const {
  std::vector<std::uint64_t> out;
  for (const auto& c : checkpoints_) out.push_back(c->index());
  return out;
}

StagePtr Trace::stage(std::uint64_t k) const {
  if (k == 0 || k > size()) {
    throw Error(ErrorCode::kStageTooEarly, "trace has stages 1.." + std::to_string(size()) + ", asked for " + std::to_string(k));
  }
  auto it = std::upper_bound(checkpoints_.begin(), checkpoints_.end(), k,
                             [](std::uint64_t x, const StagePtr& s) { return x < s->index(); });
  const StagePtr& base = *std::prev(it);
  if (base->index() == k) return base;
  std::lock_guard lock(cache_mu_);
  if (k == size()) {
    if (!head_snapshot_) head_snapshot_ = builder_.snapshot();
    return head_snapshot_;
  }
  for (const auto& s : cache_) {
    if (s->index() == k) return s;
  }
  StageBuilder b = StageBuilder::resume(*base, builder_.stream());
  for (std::uint64_t pos = base->index() + 1; pos <= k; ++pos) b.refine((*builder_.stream())[pos - 1]);
  StagePtr s = b.snapshot();
  if (cache_.size() >= kReplayCache) cache_.erase(cache_.begin());
  cache_.push_back(s);
  return s;
}

// ---------------------------------------------------------------- functional API

StagePtr init_stage(const BasisHandle& v1) {
  StageBuilder b(v1.region.kind());
  b.refine(v1);
  return b.snapshot();
}

StagePtr refine(const Stage& stage, const BasisHandle& v) {
  auto stream = std::make_shared<Stream>();
  for (std::uint64_t i = 1; i <= stage.index(); ++i) stream->push_back(stage.inserted(i));
  StageBuilder b = StageBuilder::resume(stage, stream);
  b.refine(v);
  return b.snapshot();
}

ClassifyResult classify(const Stage& stage, CellId cell, const BasisHandle& v) {
  const OpenRegion r = stage.region(cell);
  ClassifyResult out{Classification::kSplit, meet(r, v.region), meet_exterior(r, v)};
  if (out.in_region.is_empty()) {
    if (!(out.ext_region == r)) {
      throw Error(ErrorCode::kInvariantViolation, "cell " + r.to_string() + " meets the boundary of " + v.region.to_string() + " only");
    }
    out.kind = Classification::kPersistExterior;
  } else if (out.ext_region.is_empty()) {
    out.kind = Classification::kPersistInside;
  }
  return out;
}

// ---------------------------------------------------------------- ring

namespace {

void require_same_stage(const RingElement& a, const RingElement& b) {
  if (a.stage != b.stage) {
    throw Error(ErrorCode::kStageMismatch, "elements of stages " + std::to_string(a.stage) + " and " + std::to_string(b.stage));
  }
}

template <typename T>
std::vector<T> sorted_union(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <typename T>
std::vector<T> sorted_difference(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

RingElement decompose(const OpenRegion& region, const Stage& stage) {
  if (region.kind() != stage.kind()) throw Error(ErrorCode::kPreconditionViolation, "region of the other space");
  RingElement out;
  out.stage = stage.index();
  const auto& pieces = stage.pieces();
  std::vector<CellId> hits;
  auto reject = [&](const std::string& why) {
    return Error(ErrorCode::kNotRepresentable, region.to_string() + " at stage " + std::to_string(stage.index()) + ": " + why);
  };
  for (const auto& part : region.parts()) {
    auto it = std::lower_bound(pieces.begin(), pieces.end(), part.lo,
                               [](const detail::Piece& q, const Rational& x) { return q.lo < x; });
    if (it == pieces.end() || it->lo != part.lo) throw reject("cuts a cell or leaves the covered part near " + part.lo.to_string());
    Rational cursor = part.lo;
    for (; it != pieces.end() && it->lo < part.hi; ++it) {
      if (it->lo != cursor) throw reject("uncovered gap at " + cursor.to_string());
      if (part.hi < it->hi) throw reject("cuts a cell near " + part.hi.to_string());
      if (cursor != part.lo) out.points.push_back(cursor);
      hits.push_back(it->cell);
      cursor = it->hi;
    }
    if (cursor != part.hi) throw reject("uncovered gap at " + cursor.to_string());
  }
  std::sort(hits.begin(), hits.end());
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    if (j - i != stage.piece_indices(hits[i]).size()) throw reject("takes only part of a cell");
    out.cells.push_back(hits[i]);
    i = j;
  }
  if (stage.kind() == SpaceKind::kCantor) out.points.clear();
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

RingElement ring_union(const RingElement& d1, const RingElement& d2) {
  require_same_stage(d1, d2);
  return {d1.stage, sorted_union(d1.cells, d2.cells), sorted_union(d1.points, d2.points)};
}

RingElement ring_difference(const RingElement& d1, const RingElement& d2) {
  require_same_stage(d1, d2);
  return {d1.stage, sorted_difference(d1.cells, d2.cells), sorted_difference(d1.points, d2.points)};
}

OpenRegion open_region(const RingElement& d, const Stage& stage) {
  if (d.stage != stage.index()) throw Error(ErrorCode::kStageMismatch, "element and stage differ");
  std::vector<Interval> parts;
  for (CellId c : d.cells) {
    for (std::uint32_t q : stage.piece_indices(c)) parts.push_back({stage.pieces()[q].lo, stage.pieces()[q].hi});
  }
  return stage.kind() == SpaceKind::kRationalLine ? OpenRegion::line(std::move(parts)) : OpenRegion::cantor(std::move(parts));
}

bool ring_contains(const RingElement& d, const Stage& stage, const Rational& point) {
  if (d.stage != stage.index()) throw Error(ErrorCode::kStageMismatch, "element and stage differ");
  if (std::binary_search(d.points.begin(), d.points.end(), point)) return true;
  auto c = stage.cell_at(point);
  return c && std::binary_search(d.cells.begin(), d.cells.end(), *c);
}

RingElement lift(const RingElement& d, const Stage& from, const Stage& to) {
  if (to.index() < from.index()) throw Error(ErrorCode::kStageTooEarly, "cannot lift to an earlier stage");
  RingElement out = decompose(open_region(d, from), to);
  out.points = sorted_union(out.points, d.points);
  return out;
}

}  // namespace premeasure
