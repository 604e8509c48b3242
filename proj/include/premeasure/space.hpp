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
#include <set>
#include <vector>

#include "premeasure/region.hpp"

namespace premeasure {

inline constexpr std::uint64_t kDefaultScanCap = 1'000'000;

struct BasisHandle {
  std::uint64_t index = 0;
  OpenRegion region;

  friend bool operator==(const BasisHandle&, const BasisHandle&) = default;
};

using IndexSet = std::set<std::uint64_t>;

class LineEnumeration;

/// An enumerated basis of regular open sets with compact closure.
///
/// Canonical tables:
///
///   Cantor space: index k >= 1 is the cylinder of the binary prefix given by
///   k without its leading 1 bit, so 1 -> [], 2 -> [0], 3 -> [1], 4 -> [00],
///   5 -> [01], 6 -> [10], 7 -> [11], 8 -> [000], ...
///
///   Rational line: built rank by rank. Rank n first lists the triadic
///   straddles (x - 3^-t, x + 3^-t), x = b/3^c in lowest terms, t >= c, with
///   max(t, 3c, 3*ceil|x|) = n, ordered by (c, |b|, b, t). It then lists, for
///   every atom of the partition cut out by everything listed so far, the
///   middle third of the atom's longest component (leftmost on ties), ordered
///   by position. Repeats are skipped. The straddles alone already form a
///   basis; the middle thirds keep closed holes close at hand. First entries:
///     1 (-1,1)        2 (-1/3,1/3)    3 (-7/9,-5/9)   4 (-1/9,1/9)
///     5 (-19/27,-17/27)  6 (-7/27,-5/27)  7 (-1/27,1/27)  8 (5/9,7/9)
///     9 (-2,0)        10 (-4/3,-2/3)
///
/// An injected prefix overrides indices 1..n; the canonical table follows
/// with entries equal to a prefix region skipped.
class Space {
 public:
  static Space rational_line(std::vector<OpenRegion> injected = {});
  static Space cantor(std::vector<OpenRegion> injected = {});

  SpaceKind kind() const { return kind_; }
  const std::vector<OpenRegion>& injected() const { return injected_; }

  BasisHandle enumerate(std::uint64_t index) const;
  /// The single run of basis element `index`.
  Interval run(std::uint64_t index) const;
  std::uint64_t index_of(const OpenRegion& region) const;

  BoundaryDescriptor boundary(const BasisHandle& v) const;

  BasisHandle find_hole(const OpenRegion& u, const IndexSet& forbidden, std::uint64_t min_index,
                        std::uint64_t scan_cap = kDefaultScanCap) const;

  /// Smallest-index cover, one basis set per still-uncovered point, scanning
  /// upward from min_index.
  std::vector<BasisHandle> finite_subcover(const BoundaryDescriptor& k, const OpenRegion& constraint,
                                           const IndexSet& forbidden, std::uint64_t min_index,
                                           std::uint64_t scan_cap = kDefaultScanCap) const;

 private:
  Space(SpaceKind kind, std::vector<OpenRegion> injected);
  Interval canonical_run(std::uint64_t canonical_index) const;
  std::uint64_t canonical_index_of(const Interval& run) const;

  SpaceKind kind_;
  std::vector<OpenRegion> injected_;
  std::vector<std::uint64_t> skipped_;  // sorted canonical indices shadowed by the prefix
  std::shared_ptr<LineEnumeration> line_;
};

OpenRegion meet_exterior(const OpenRegion& a, const BasisHandle& v);

}  // namespace premeasure
