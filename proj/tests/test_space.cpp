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

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "premeasure/errors.hpp"
#include "premeasure/space.hpp"
#include "test_support.hpp"

using namespace premeasure;
using premeasure::testing::C;
using premeasure::testing::L;
using premeasure::testing::error_of;

namespace {

struct TableRow {
  std::uint64_t index;
  Rational lo;
  Rational hi;
};

std::vector<TableRow> load_line_table() {
  std::ifstream in(std::string(PREMEASURE_TEST_DATA) + "/line_table_head.txt");
  REQUIRE(in.good());
  std::vector<TableRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string i, lo, hi;
    fields >> i >> lo >> hi;
    rows.push_back({std::stoull(i), Rational::parse(lo), Rational::parse(hi)});
  }
  return rows;
}

// Scan oracle for find_hole on a single-interval u: closure strictly inside
// means lo_u < lo and hi < hi_u.
std::uint64_t scan_hole(const Space& s, const Interval& u, std::uint64_t from, const IndexSet& forbidden) {
  for (std::uint64_t k = from;; ++k) {
    if (forbidden.contains(k)) continue;
    const Interval r = s.run(k);
    if (u.lo < r.lo && r.hi < u.hi) return k;
  }
}

}  // namespace

TEST_CASE("line table head is frozen") {
  const auto s = Space::rational_line();
  const auto rows = load_line_table();
  REQUIRE(rows.size() == 200);
  for (const auto& row : rows) {
    CAPTURE(row.index);
    CHECK(s.run(row.index) == Interval{row.lo, row.hi});
    CHECK(s.enumerate(row.index).region == OpenRegion::interval(row.lo, row.hi));
  }
  CHECK(s.enumerate(1).region == L("(-1,1)"));
  CHECK(s.enumerate(8).region == L("(5/9,7/9)"));
  CHECK(s.enumerate(13).region == L("(0,2)"));
}

TEST_CASE("cantor table") {
  const auto s = Space::cantor();
  CHECK(s.enumerate(1).region == C("[]"));
  CHECK(s.enumerate(2).region == C("[0]"));
  CHECK(s.enumerate(3).region == C("[1]"));
  CHECK(s.enumerate(5).region == C("[01]"));
  CHECK(s.enumerate(13).region == C("[101]"));
  CHECK(s.index_of(C("[01]")) == 5);
  CHECK(s.index_of(C("[]")) == 1);
}

TEST_CASE("round trip up to 10^4") {
  for (const auto& s : {Space::rational_line(), Space::cantor()}) {
    for (std::uint64_t k = 1; k <= 10000; ++k) {
      const auto h = s.enumerate(k);
      CHECK(h.index == k);
      CHECK(s.index_of(h.region) == k);
    }
  }
}

TEST_CASE("index_of rejects non-basis regions") {
  const auto line = Space::rational_line();
  const auto cantor = Space::cantor();
  CHECK(error_of([&] { line.index_of(L("(0,1)+(2,3)")); }) == ErrorCode::kNotABasisElement);
  CHECK(error_of([&] { line.index_of(L("(0,1/2)")); }) == ErrorCode::kNotABasisElement);
  CHECK(error_of([&] { cantor.index_of(C("[0]+[11]")); }) == ErrorCode::kNotABasisElement);
  CHECK(error_of([&] { line.index_of(OpenRegion::empty(SpaceKind::kRationalLine)); }) ==
        ErrorCode::kNotABasisElement);
}

TEST_CASE("find_hole") {
  const auto line = Space::rational_line();
  const auto cantor = Space::cantor();

  CHECK(line.find_hole(L("(0,1)"), {}, 1).index == 8);
  CHECK(cantor.find_hole(C("[0]"), {}, 1).index == 4);
  CHECK(cantor.find_hole(C("[0]"), {4}, 1).index == 5);
  CHECK(error_of([&] { line.find_hole(OpenRegion::empty(SpaceKind::kRationalLine), {}, 1); }) ==
        ErrorCode::kEmptyRegion);
  CHECK(error_of([&] { line.find_hole(L("(0,1)"), {}, 1, 5); }) == ErrorCode::kScanExhausted);

  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    const std::int64_t a = static_cast<std::int64_t>(rng() % 40) - 20;
    const std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 12);
    const Interval u{Rational(a, 9), Rational(a + w, 9)};
    const std::uint64_t from = 1 + rng() % 300;
    IndexSet forbidden;
    for (int q = 0; q < 3; ++q) forbidden.insert(from + rng() % 200);
    const auto h = line.find_hole(OpenRegion::interval(u.lo, u.hi), forbidden, from);
    CHECK(h.index == scan_hole(line, u, from, forbidden));
    CHECK(closure_strictly_inside(h.region, OpenRegion::interval(u.lo, u.hi)));
  }
}

TEST_CASE("finite_subcover") {
  const auto line = Space::rational_line();
  const auto cantor = Space::cantor();
  const OpenRegion constraint = L("(-1,1)+(3/2,5/2)");
  const BoundaryDescriptor k{SpaceKind::kRationalLine, {0, 2}};

  const auto cover = line.finite_subcover(k, constraint, {}, 1);
  REQUIRE(cover.size() == 2);
  for (std::size_t q = 0; q < 2; ++q) {
    // Oracle: smallest index whose run contains the point and sits in its component.
    const Rational x = k.points[q];
    const Interval comp = constraint.parts()[q];
    std::uint64_t expect = 1;
    while (true) {
      const Interval r = line.run(expect);
      if (r.lo < x && x < r.hi && comp.lo <= r.lo && r.hi <= comp.hi) break;
      ++expect;
    }
    CHECK(cover[q].index == expect);
    CHECK(cover[q].region.contains(x));
    CHECK(is_subset(cover[q].region, constraint));
  }
  CHECK(cover[0].index == 1);

  CHECK(line.finite_subcover({SpaceKind::kRationalLine, {}}, constraint, {}, 1).empty());
  CHECK(cantor.finite_subcover({SpaceKind::kCantor, {}}, C("[0]"), {}, 1).empty());
  CHECK(error_of([&] {
          line.finite_subcover({SpaceKind::kRationalLine, {0}}, L("(1,2)"), {}, 1);
        }) == ErrorCode::kInfeasibleCover);
}

TEST_CASE("injected prefix overrides and filters the canonical table") {
  const auto s = Space::rational_line({L("(0,2)"), L("(1,3)"), L("(9/4,11/4)")});
  const auto canonical = Space::rational_line();
  CHECK(s.enumerate(1).region == L("(0,2)"));
  CHECK(s.enumerate(2).region == L("(1,3)"));
  CHECK(s.enumerate(3).region == L("(9/4,11/4)"));
  CHECK(s.enumerate(4).region == canonical.enumerate(1).region);
  CHECK(s.enumerate(15).region == canonical.enumerate(12).region);
  CHECK(s.enumerate(16).region == canonical.enumerate(14).region);
  CHECK(s.index_of(L("(0,2)")) == 1);
  for (std::uint64_t k = 1; k <= 2000; ++k) CHECK(s.index_of(s.enumerate(k).region) == k);

  const auto c = Space::cantor({C("[0]"), C("[11]")});
  CHECK(c.enumerate(3).region == C("[]"));
  CHECK(c.enumerate(4).region == C("[1]"));
  CHECK(c.enumerate(5).region == C("[00]"));
}

TEST_CASE("split non-degeneracy and regularity closure") {
  const auto s = Space::rational_line();
  std::mt19937_64 rng(11);
  for (int round = 0; round < 400; ++round) {
    OpenRegion a = s.enumerate(1 + rng() % 60).region;
    for (int step = 0, n = 1 + static_cast<int>(rng() % 4); step < n; ++step) {
      const auto v = s.enumerate(1 + rng() % 60);
      const OpenRegion next = (rng() & 1) ? meet(a, v.region) : meet_exterior(a, v);
      if (next.is_empty()) break;
      a = next;
      CHECK(regularize(a) == a);
    }
    const auto v = s.enumerate(1 + rng() % 200);
    bool touches = false;
    for (const auto& p : s.boundary(v).points) touches = touches || a.contains(p);
    if (touches) {
      CHECK_FALSE(meet(a, v.region).is_empty());
      CHECK_FALSE(meet_exterior(a, v).is_empty());
    }
  }
}
