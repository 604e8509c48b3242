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

#include "premeasure/space.hpp"

#include <algorithm>
#include <bit>

#include "line_enumeration.hpp"
#include "premeasure/errors.hpp"

namespace premeasure {

namespace {

void require_single_run(SpaceKind kind, const OpenRegion& r) {
  if (r.kind() != kind) throw Error(ErrorCode::kNotABasisElement, "region belongs to the other space");
  if (r.parts().size() != 1) throw Error(ErrorCode::kNotABasisElement, r.to_string() + " is not a single basis set");
  if (kind == SpaceKind::kCantor && r.prefixes().size() != 1) {
    throw Error(ErrorCode::kNotABasisElement, r.to_string() + " is not a single cylinder");
  }
}

bool open_contains(const Interval& iv, const Rational& x) { return iv.lo < x && x < iv.hi; }

}  // namespace

Space::Space(SpaceKind kind, std::vector<OpenRegion> injected) : kind_(kind), injected_(std::move(injected)) {
  if (kind_ == SpaceKind::kRationalLine) line_ = LineEnumeration::shared();
  for (std::size_t i = 0; i < injected_.size(); ++i) {
    require_single_run(kind_, injected_[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (injected_[j] == injected_[i]) {
        throw Error(ErrorCode::kPreconditionViolation, "injected region " + injected_[i].to_string() + " repeats");
      }
    }
    try {
      skipped_.push_back(canonical_index_of(injected_[i].parts().front()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotABasisElement) throw;
    }
  }
  std::sort(skipped_.begin(), skipped_.end());
}

Space Space::rational_line(std::vector<OpenRegion> injected) {
  return Space(SpaceKind::kRationalLine, std::move(injected));
}

Space Space::cantor(std::vector<OpenRegion> injected) { return Space(SpaceKind::kCantor, std::move(injected)); }

Interval Space::canonical_run(std::uint64_t k) const {
  if (kind_ == SpaceKind::kRationalLine) return line_->at(k);
  const int len = std::bit_width(k) - 1;
  if (len > 62) throw Error(ErrorCode::kScanExhausted, "cantor index beyond 62-bit prefixes");
  const auto den = static_cast<std::int64_t>(std::uint64_t{1} << len);
  const auto value = static_cast<std::int64_t>(k - (std::uint64_t{1} << len));
  return {Rational(value, den), Rational(value + 1, den)};
}

std::uint64_t Space::canonical_index_of(const Interval& run) const {
  if (kind_ == SpaceKind::kRationalLine) return line_->index_of(run);
  const Rational width = run.hi - run.lo;
  if (width.numerator() != 1) throw Error(ErrorCode::kNotABasisElement, "not a cylinder");
  const std::int64_t den = width.denominator();
  const Rational scaled = run.lo * den;
  if (!scaled.is_integer()) throw Error(ErrorCode::kNotABasisElement, "not a cylinder");
  return static_cast<std::uint64_t>(den) + static_cast<std::uint64_t>(scaled.numerator());
}

Interval Space::run(std::uint64_t index) const {
  if (index == 0) throw Error(ErrorCode::kPreconditionViolation, "basis indices start at 1");
  if (index <= injected_.size()) return injected_[index - 1].parts().front();
  std::uint64_t c = index - injected_.size();
  for (std::uint64_t s : skipped_) {
    if (s <= c) ++c;
  }
  return canonical_run(c);
}

BasisHandle Space::enumerate(std::uint64_t index) const {
  const Interval iv = run(index);
  if (kind_ == SpaceKind::kRationalLine) return {index, OpenRegion::line({iv})};
  return {index, OpenRegion::cantor({iv})};
}

std::uint64_t Space::index_of(const OpenRegion& region) const {
  require_single_run(kind_, region);
  for (std::size_t i = 0; i < injected_.size(); ++i) {
    if (injected_[i] == region) return i + 1;
  }
  const std::uint64_t c = canonical_index_of(region.parts().front());
  const auto below = static_cast<std::uint64_t>(std::lower_bound(skipped_.begin(), skipped_.end(), c) - skipped_.begin());
  return injected_.size() + c - below;
}

BoundaryDescriptor Space::boundary(const BasisHandle& v) const { return boundary_of(v.region); }

BasisHandle Space::find_hole(const OpenRegion& u, const IndexSet& forbidden, std::uint64_t min_index,
                             std::uint64_t scan_cap) const {
  if (u.is_empty()) throw Error(ErrorCode::kEmptyRegion, "cannot bore a hole in the empty region");
  const std::uint64_t start = std::max<std::uint64_t>(min_index, 1);
  for (std::uint64_t idx = start; idx < start + scan_cap; ++idx) {
    if (forbidden.contains(idx)) continue;
    BasisHandle h = enumerate(idx);
    if (closure_strictly_inside(h.region, u)) return h;
  }
  throw Error(ErrorCode::kScanExhausted, "no hole inside " + u.to_string() + " within " + std::to_string(scan_cap) + " indices");
}

std::vector<BasisHandle> Space::finite_subcover(const BoundaryDescriptor& k, const OpenRegion& constraint,
                                                const IndexSet& forbidden, std::uint64_t min_index,
                                                std::uint64_t scan_cap) const {
  std::vector<BasisHandle> out;
  if (k.empty()) return out;
  for (const auto& p : k.points) {
    if (!constraint.contains(p)) {
      throw Error(ErrorCode::kInfeasibleCover, "point " + p.to_string() + " lies outside " + constraint.to_string());
    }
  }
  const std::uint64_t start = std::max<std::uint64_t>(min_index, 1);
  for (const auto& p : k.points) {
    if (std::any_of(out.begin(), out.end(), [&](const BasisHandle& h) { return open_contains(h.region.parts().front(), p); })) {
      continue;
    }
    bool found = false;
    for (std::uint64_t idx = start; idx < start + scan_cap; ++idx) {
      if (forbidden.contains(idx)) continue;
      const Interval iv = run(idx);
      if (!open_contains(iv, p)) continue;
      BasisHandle h = enumerate(idx);
      if (!is_subset(h.region, constraint)) continue;
      out.push_back(std::move(h));
      found = true;
      break;
    }
    if (!found) {
      throw Error(ErrorCode::kScanExhausted, "no cover set for " + p.to_string() + " within " + std::to_string(scan_cap) + " indices");
    }
  }
  std::sort(out.begin(), out.end(), [](const BasisHandle& a, const BasisHandle& b) { return a.index < b.index; });
  return out;
}

OpenRegion meet_exterior(const OpenRegion& a, const BasisHandle& v) { return minus_closure(a, v.region); }

}  // namespace premeasure
