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

#include <random>

#include "premeasure/dyadic.hpp"
#include "premeasure/rational.hpp"

using premeasure::DyadicMass;
using premeasure::DyadicSum;
using premeasure::Rational;

TEST_CASE("rationals reduce and compare exactly") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(midpoint(Rational(9, 4), Rational(11, 4)) == Rational(5, 2));
  CHECK(Rational(-3, 9).to_string() == "-1/3");
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(INT64_MAX) + Rational(1));
}

TEST_CASE("dyadic masses stay canonical") {
  const DyadicMass q(2, 3);
  CHECK(q.mantissa() == 1);
  CHECK(q.scale() == 2);
  CHECK(DyadicMass(0, 9).scale() == 0);
  CHECK(DyadicMass::pow2_neg(2) + DyadicMass::pow2_neg(2) == DyadicMass::pow2_neg(1));
  CHECK(DyadicMass::pow2_neg(1).half() == DyadicMass::pow2_neg(2));
  CHECK((DyadicMass(3, 2) - DyadicMass::pow2_neg(2)).to_string() == "1/2^1");
  CHECK(DyadicMass::pow2_neg(3) < DyadicMass(3, 4));
  CHECK_THROWS(DyadicMass::pow2_neg(3) - DyadicMass::pow2_neg(2));
  CHECK(DyadicMass::one().to_string() == "1");
}

TEST_CASE("bulk sums agree with pairwise sums") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    DyadicSum bulk;
    DyadicMass pairwise;
    const int n = 1 + static_cast<int>(rng() % 200);
    for (int q = 0; q < n; ++q) {
      const DyadicMass m = rng() % 5 == 0 ? DyadicMass(rng() % 17, rng() % 90) : DyadicMass::pow2_neg(rng() % 150);
      bulk.add(m);
      pairwise += m;
    }
    CHECK(bulk.value() == pairwise);
    CHECK(bulk.terms() == static_cast<std::size_t>(n));
  }
}
