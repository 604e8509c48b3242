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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "premeasure/rational.hpp"

namespace premeasure {

enum class SpaceKind { kRationalLine, kCantor };

std::string_view space_kind_name(SpaceKind kind);

/// A run of the space between two positions.
///
/// On the rational line the run is the open interval (lo, hi). In Cantor space
/// {0,1}^N is identified with [0,1) through binary expansion, and a run is the
/// half-open dyadic interval [lo, hi), i.e. a finite union of cylinders.
struct Interval {
  Rational lo;
  Rational hi;

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Canonical exact description of an open set.
///
/// Parts are sorted, nonempty and pairwise disjoint. On the line no two parts
/// overlap (touching parts such as (0,1),(1,2) stay separate since the shared
/// endpoint is missing). In Cantor space touching parts are merged, which is
/// the same thing as an antichain of prefixes with sibling pairs merged.
class OpenRegion {
 public:
  OpenRegion() = default;

  static OpenRegion empty(SpaceKind kind);
  static OpenRegion line(std::vector<Interval> parts);
  static OpenRegion interval(const Rational& lo, const Rational& hi);
  static OpenRegion cantor(std::vector<Interval> parts);
  /// Cylinder of all sequences starting with `prefix` ("" is the whole space).
  static OpenRegion cylinder(std::string_view prefix);
  static OpenRegion cylinders(const std::vector<std::string>& prefixes);
  /// Cantor space itself.
  static OpenRegion whole_cantor();

  /// Literal syntax: line "(p,q)" parts joined by '+', Cantor "[0110]" parts
  /// joined by '+', "[]" the whole Cantor space, "{}" the empty region.
  static OpenRegion parse(SpaceKind kind, std::string_view literal);

  SpaceKind kind() const { return kind_; }
  const std::vector<Interval>& parts() const { return parts_; }
  bool is_empty() const { return parts_.empty(); }

  /// Cantor only: the canonical antichain of prefixes, in lexicographic order.
  std::vector<std::string> prefixes() const;

  bool contains(const Rational& point) const;

  std::string to_string() const;

  friend bool operator==(const OpenRegion&, const OpenRegion&) = default;

 private:
  OpenRegion(SpaceKind kind, std::vector<Interval> parts) : kind_(kind), parts_(std::move(parts)) {}
  static std::vector<Interval> canonical(SpaceKind kind, std::vector<Interval> parts);

  SpaceKind kind_ = SpaceKind::kRationalLine;
  std::vector<Interval> parts_;
};

/// Exact boundary of a basis set: its two endpoints on the line, always
/// empty in Cantor space (cylinders are clopen).
struct BoundaryDescriptor {
  SpaceKind kind = SpaceKind::kRationalLine;
  std::vector<Rational> points;  // sorted, distinct

  bool empty() const { return points.empty(); }
  friend bool operator==(const BoundaryDescriptor&, const BoundaryDescriptor&) = default;
};

/// Interval of the cylinder named by a binary prefix.
Interval cylinder_interval(std::string_view prefix);

OpenRegion meet(const OpenRegion& a, const OpenRegion& b);
OpenRegion join(const OpenRegion& a, const OpenRegion& b);
/// a minus the closure of b. On the line this equals a ∩ exterior(b).
OpenRegion minus_closure(const OpenRegion& a, const OpenRegion& b);
/// a minus the closures of many runs; the runs must be sorted by lo.
OpenRegion minus_closures(const OpenRegion& a, std::span<const Interval> sorted_runs);
/// Interior of the closure.
OpenRegion regularize(const OpenRegion& a);
/// closure(a) ⊆ b and b ∖ closure(a) is nonempty.
bool closure_strictly_inside(const OpenRegion& a, const OpenRegion& b);
bool is_subset(const OpenRegion& a, const OpenRegion& b);
bool is_disjoint(const OpenRegion& a, const OpenRegion& b);
/// Endpoints of every part (line); empty in Cantor space.
BoundaryDescriptor boundary_of(const OpenRegion& a);

}  // namespace premeasure
