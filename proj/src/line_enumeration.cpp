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

#include "line_enumeration.hpp"

#include <algorithm>
#include <optional>

#include "premeasure/errors.hpp"

namespace premeasure {

namespace {

std::int64_t pow3(std::uint32_t e) {
  std::int64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= 3;
  return r;
}

// Exponent e with d == 3^e, or nullopt.
std::optional<std::uint32_t> log3_exact(std::int64_t d) {
  std::uint32_t e = 0;
  while (d % 3 == 0) {
    d /= 3;
    ++e;
  }
  if (d != 1) return std::nullopt;
  return e;
}

std::int64_t ceil_abs(const Rational& x) {
  const std::int64_t n = x.numerator() < 0 ? -x.numerator() : x.numerator();
  return (n + x.denominator() - 1) / x.denominator();
}

}  // namespace

std::shared_ptr<LineEnumeration> LineEnumeration::shared() {
  static std::shared_ptr<LineEnumeration> instance = std::make_shared<LineEnumeration>();
  return instance;
}

void LineEnumeration::push_locked(const Interval& iv) {
  if (!index_.emplace(iv, entries_.size()).second) return;
  entries_.push_back(iv);
  ranks_.push_back(next_rank_);
  atoms_.refine(iv, entries_.size() - 1);
}

void LineEnumeration::grow_locked() {
  if (entries_.size() > kMaxEntries) {
    throw Error(ErrorCode::kScanExhausted, "line enumeration budget of " + std::to_string(kMaxEntries) + " entries reached");
  }
  const std::uint32_t n = next_rank_;
  const std::int64_t xmax = n / 3;
  for (std::uint32_t c = 0; 3 * c <= n; ++c) {
    const std::int64_t den = pow3(c);
    for (std::int64_t mag = 0; mag <= xmax * den; ++mag) {
      if (c > 0 && mag % 3 == 0) continue;
      const std::int64_t signs[2] = {-mag, mag};
      for (int s = 0; s < (mag == 0 ? 1 : 2); ++s) {
        const Rational x(signs[s], den);
        const std::uint32_t base = std::max<std::uint32_t>(3 * c, static_cast<std::uint32_t>(3 * ceil_abs(x)));
        const std::uint32_t t_lo = base < n ? n : c;
        for (std::uint32_t t = t_lo; t <= n; ++t) {
          const Rational h(1, pow3(t));
          push_locked({x - h, x + h});
        }
      }
    }
  }

  // Middle third of the longest component of every atom.
  std::vector<std::optional<Interval>> best(atoms_.id_count());
  for (const auto& [lo, tail] : atoms_.pieces()) {
    auto& slot = best[tail.cell];
    if (!slot || slot->hi - slot->lo < tail.hi - lo) slot = Interval{lo, tail.hi};
  }
  std::vector<Interval> holes;
  for (const auto& slot : best) {
    if (!slot) continue;
    const Rational third = (slot->hi - slot->lo) / 3;
    holes.push_back({slot->lo + third, slot->hi - third});
  }
  std::sort(holes.begin(), holes.end());
  for (const auto& h : holes) push_locked(h);
  ++next_rank_;
}

Interval LineEnumeration::at(std::uint64_t index) {
  std::lock_guard lock(mu_);
  while (entries_.size() <= index) grow_locked();
  return entries_[index];
}

std::uint32_t LineEnumeration::rank_of_entry(std::uint64_t index) {
  std::lock_guard lock(mu_);
  while (entries_.size() <= index) grow_locked();
  return ranks_[index];
}

std::uint64_t LineEnumeration::index_of(const Interval& run) {
  auto not_basis = [&] {
    return Error(ErrorCode::kNotABasisElement,
                 "(" + run.lo.to_string() + "," + run.hi.to_string() + ") is not in the line table");
  };
  if (!log3_exact(run.lo.denominator()) || !log3_exact(run.hi.denominator())) throw not_basis();
  std::lock_guard lock(mu_);
  if (auto it = index_.find(run); it != index_.end()) return it->second;

  const Rational center = midpoint(run.lo, run.hi);
  const Rational half = (run.hi - run.lo) / 2;
  const auto c = log3_exact(center.denominator());
  if (c && half.numerator() == 1 && log3_exact(half.denominator())) {
    const std::uint32_t t = *log3_exact(half.denominator());
    if (t >= *c) {
      const std::uint32_t rank =
          std::max({t, 3 * *c, static_cast<std::uint32_t>(3 * ceil_abs(center))});
      while (next_rank_ <= rank) grow_locked();
      if (auto it = index_.find(run); it != index_.end()) return it->second;
      throw Error(ErrorCode::kInvariantViolation, "straddle missing from its rank");
    }
  }
  // Middle thirds appear only while the closure sits inside a single atom.
  while (!atoms_.has_breakpoint_in(run.lo, run.hi)) {
    grow_locked();
    if (auto it = index_.find(run); it != index_.end()) return it->second;
  }
  throw not_basis();
}

}  // namespace premeasure
