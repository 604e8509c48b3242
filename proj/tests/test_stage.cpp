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
#include <memory>
#include <random>

#include "premeasure/errors.hpp"
#include "premeasure/stage.hpp"
#include "test_support.hpp"

using namespace premeasure;
using premeasure::testing::C;
using premeasure::testing::L;
using premeasure::testing::error_of;

namespace {

std::unique_ptr<Trace> canonical_trace(const Space& s, std::uint64_t n) {
  auto trace = std::make_unique<Trace>(s.kind());
  for (std::uint64_t k = 1; k <= n; ++k) trace->append(s.enumerate(k));
  return trace;
}

std::unique_ptr<Trace> t1_trace() {
  return canonical_trace(Space::rational_line({L("(0,2)"), L("(1,3)"), L("(9/4,11/4)")}), 3);
}

std::unique_ptr<Trace> t2_trace() { return canonical_trace(Space::cantor({C("[0]"), C("[01]"), C("[1]")}), 3); }

CellId cell_of(const Stage& st, const char* literal) {
  const OpenRegion r = OpenRegion::parse(st.kind(), literal);
  for (const auto& v : st.cells()) {
    if (v.region == r) return v.id;
  }
  FAIL("no cell " << literal);
  return 0;
}

std::vector<std::pair<std::string, DyadicMass>> table(const Stage& st) {
  std::vector<std::pair<std::string, DyadicMass>> out;
  for (const auto& v : st.cells()) out.emplace_back(v.region.to_string(), v.mass);
  std::sort(out.begin(), out.end());
  return out;
}

DyadicMass q(std::uint64_t k) { return DyadicMass::pow2_neg(k); }

std::vector<Rational> grid() {
  std::vector<Rational> out;
  for (std::int64_t k = -96; k <= 96; ++k) out.emplace_back(k, 16);
  return out;
}

// Membership straight from the cell regions and point list.
bool member(const RingElement& d, const Stage& st, const Rational& x) {
  if (std::binary_search(d.points.begin(), d.points.end(), x)) return true;
  for (CellId c : d.cells) {
    if (st.region(c).contains(x)) return true;
  }
  return false;
}

RingElement random_element(const Stage& st, std::mt19937_64& rng) {
  RingElement d;
  d.stage = st.index();
  for (CellId c = 0; c < st.cell_count(); ++c) {
    if (rng() % 3 == 0) d.cells.push_back(c);
  }
  for (const auto& p : st.boundary_support().points) {
    if (rng() % 3 == 0) d.points.push_back(p);
  }
  return d;
}

}  // namespace

TEST_CASE("init_stage") {
  const auto line = init_stage({1, L("(0,2)")});
  CHECK(line->cell_count() == 1);
  CHECK(table(*line) == decltype(table(*line)){{"(0,2)", q(1)}});
  CHECK(line->total_mass() == q(1));
  CHECK(line->total_mass() == DyadicMass::one() - q(1));

  const auto cantor = init_stage({2, C("[0]")});
  CHECK(table(*cantor) == decltype(table(*cantor)){{"[0]", q(1)}});
  CHECK(cantor->view(0).signature.flags == "I");
  CHECK(cantor->view(0).origin.kind == OriginKind::kRoot);
}

TEST_CASE("T1 stage tables") {
  const auto tp = t1_trace();
  const Trace& t = *tp;
  CHECK(table(*t.stage(1)) == decltype(table(*t.stage(1))){{"(0,2)", q(1)}});
  CHECK(table(*t.stage(2)) ==
        decltype(table(*t.stage(2))){{"(0,1)", q(2)}, {"(1,2)", q(2)}, {"(2,3)", q(2)}});
  CHECK(table(*t.stage(3)) == decltype(table(*t.stage(3))){{"(0,1)", q(2)},
                                                            {"(1,2)", q(2)},
                                                            {"(2,9/4)+(11/4,3)", q(3)},
                                                            {"(9/4,11/4)", q(3)}});
  const auto s3 = t.stage(3);
  CHECK(s3->signature(cell_of(*s3, "(0,1)")).flags == "IEE");
  CHECK(s3->signature(cell_of(*s3, "(1,2)")).flags == "IIE");
  CHECK(s3->signature(cell_of(*s3, "(9/4,11/4)")).flags == "EII");
  CHECK(s3->signature(cell_of(*s3, "(2,9/4)+(11/4,3)")).flags == "EIE");
  CHECK(s3->origin(cell_of(*s3, "(9/4,11/4)")).kind == OriginKind::kSplit);
  CHECK(t.stage(2)->origin(cell_of(*t.stage(2), "(2,3)")).kind == OriginKind::kNewRegion);
  CHECK(s3->total_mass() == q(1) + q(2));
  CHECK(s3->boundary_support().points == std::vector<Rational>{0, 1, 2, Rational(9, 4), Rational(11, 4), 3});
}

TEST_CASE("T2 stage tables") {
  const auto tp = t2_trace();
  const Trace& t = *tp;
  CHECK(table(*t.stage(2)) == decltype(table(*t.stage(2))){{"[00]", q(2)}, {"[01]", q(2)}});
  CHECK(table(*t.stage(3)) == decltype(table(*t.stage(3))){{"[00]", q(2)}, {"[01]", q(2)}, {"[1]", q(3)}});
  CHECK(t.reports()[1].new_region == false);
  CHECK(t.stage(3)->total_mass() == q(1) + q(3));
  CHECK(t.stage(3)->boundary_support().empty());
}

TEST_CASE("classify") {
  const auto st = init_stage({1, L("(0,2)")});
  const auto split = classify(*st, 0, {2, L("(1,3)")});
  CHECK(split.kind == Classification::kSplit);
  CHECK(split.in_region == L("(1,2)"));
  CHECK(split.ext_region == L("(0,1)"));

  const auto far = init_stage({1, L("(4,5)")});
  CHECK(classify(*far, 0, {2, L("(0,1)")}).kind == Classification::kPersistExterior);

  const auto cyl = init_stage({5, C("[01]")});
  CHECK(classify(*cyl, 0, {2, C("[0]")}).kind == Classification::kPersistInside);
}

TEST_CASE("refine rejects a repeated basis index") {
  const auto st = init_stage({1, L("(0,2)")});
  CHECK(error_of([&] { refine(*st, {1, L("(0,2)")}); }) == ErrorCode::kDuplicateInsertion);
}

TEST_CASE("decompose") {
  const auto tp = t1_trace();
  const Trace& t = *tp;
  const auto s2 = t.stage(2);
  const auto d = decompose(L("(0,2)"), *s2);
  CHECK(d.cells == std::vector<CellId>{std::min(cell_of(*s2, "(0,1)"), cell_of(*s2, "(1,2)")),
                                       std::max(cell_of(*s2, "(0,1)"), cell_of(*s2, "(1,2)"))});
  CHECK(d.points == std::vector<Rational>{1});

  const auto s3 = t.stage(3);
  const auto e = decompose(L("(1,3)"), *s3);
  std::vector<CellId> expect{cell_of(*s3, "(1,2)"), cell_of(*s3, "(9/4,11/4)"), cell_of(*s3, "(2,9/4)+(11/4,3)")};
  std::sort(expect.begin(), expect.end());
  CHECK(e.cells == expect);
  CHECK(e.points == std::vector<Rational>{2, Rational(9, 4), Rational(11, 4)});
  CHECK(open_region(e, *s3) == L("(1,2)+(2,9/4)+(9/4,11/4)+(11/4,3)"));

  CHECK(error_of([&] { decompose(L("(0,1/2)"), *t.stage(1)); }) == ErrorCode::kNotRepresentable);
  CHECK(decompose(OpenRegion::empty(SpaceKind::kRationalLine), *s3).is_empty());

  const auto cp = t2_trace();
  const Trace& c = *cp;
  CHECK(decompose(C("[0]"), *c.stage(3)).cells.size() == 2);
  CHECK(decompose(C("[]"), *c.stage(3)).cells.size() == 3);
}

TEST_CASE("ring union and difference examples") {
  const auto tp = t1_trace();
  const Trace& t = *tp;
  const auto s2 = t.stage(2);
  const CellId a = cell_of(*s2, "(0,1)");
  const CellId b = cell_of(*s2, "(1,2)");
  RingElement da{2, {a}, {}};
  RingElement db{2, {b}, {}};
  RingElement both{2, {std::min(a, b), std::max(a, b)}, {}};
  CHECK(ring_union(da, db) == both);
  CHECK(ring_union(da, RingElement{2, {}, {}}) == da);

  RingElement pa{2, {a}, {1}};
  RingElement pb{2, {b}, {2}};
  CHECK(ring_union(pa, pb) == RingElement{2, both.cells, {1, 2}});

  const auto d02 = decompose(L("(0,2)"), *s2);
  const auto d13 = decompose(L("(1,3)"), *s2);
  CHECK(ring_difference(d02, d02).is_empty());
  CHECK(ring_difference(d02, RingElement{2, {}, {}}) == d02);
  CHECK(ring_difference(d02, d13) == RingElement{2, {a}, {1}});

  CHECK(error_of([&] { ring_union(d02, decompose(L("(0,2)"), *t.stage(3))); }) == ErrorCode::kStageMismatch);
}

TEST_CASE("ring closure on a probe grid") {
  const auto s = Space::rational_line();
  const auto tp = canonical_trace(s, 12);
  const Trace& t = *tp;
  std::mt19937_64 rng(17);
  for (std::uint64_t n = 1; n <= 12; ++n) {
    const auto st = t.stage(n);
    for (int round = 0; round < 25; ++round) {
      const auto d1 = random_element(*st, rng);
      const auto d2 = random_element(*st, rng);
      const auto u = ring_union(d1, d2);
      const auto m = ring_difference(d1, d2);
      for (const auto& x : grid()) {
        const bool in1 = member(d1, *st, x);
        const bool in2 = member(d2, *st, x);
        CHECK(ring_contains(u, *st, x) == (in1 || in2));
        CHECK(ring_contains(m, *st, x) == (in1 && !in2));
      }
      // A decomposable open set decomposes back to its own cells.
      const RingElement cells_only{n, d1.cells, {}};
      CHECK(decompose(open_region(cells_only, *st), *st).cells == d1.cells);
    }
  }
}

TEST_CASE("stage invariants over canonical runs") {
  for (const auto& s : {Space::rational_line(), Space::cantor()}) {
    const auto tp = canonical_trace(s, 24);
  const Trace& t = *tp;
    for (std::uint64_t k = 1; k <= 24; ++k) {
      const auto st = t.stage(k);
      const auto cells = st->cells();
      for (std::size_t x = 0; x < cells.size(); ++x) {
        CHECK_FALSE(cells[x].region.is_empty());
        CHECK(regularize(cells[x].region) == cells[x].region);
        CHECK(cells[x].signature.flags.size() == k);
        CHECK(cells[x].signature.flags.find('I') != std::string::npos);
        for (std::size_t y = x + 1; y < cells.size(); ++y) CHECK(is_disjoint(cells[x].region, cells[y].region));
        // The region is the meet over the signature.
        OpenRegion expect = s.kind() == SpaceKind::kCantor ? OpenRegion::whole_cantor()
                                                           : OpenRegion::interval(-1000, 1000);
        for (std::uint64_t i = 1; i <= k; ++i) {
          const auto& w = st->inserted(i);
          expect = cells[x].signature.flags[i - 1] == 'I' ? meet(expect, w.region) : meet_exterior(expect, w);
        }
        CHECK(expect == cells[x].region);
      }
      CHECK(st->cell_mass_sum() == st->total_mass());
      CHECK(st->total_mass() <= DyadicMass::one() - q(k));
      if (k > 1) {
        const auto prev = t.stage(k - 1);
        const auto& rep = t.reports()[k - 1];
        CHECK(st->total_mass() == prev->total_mass() + (rep.new_region ? q(k) : DyadicMass::zero()));
        CHECK(rep.split_parent_sum == rep.split_children_sum);
        OpenRegion covered = OpenRegion::empty(s.kind());
        for (std::uint64_t i = 1; i < k; ++i) covered = join(covered, st->inserted(i).region);
        for (const auto& c : cells) {
          if (!is_subset(c.region, covered)) continue;
          int parents = 0;
          for (const auto& p : prev->cells()) parents += is_subset(c.region, p.region) ? 1 : 0;
          CHECK(parents == 1);
        }
      }
    }
  }
}
