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

#include "premeasure/region.hpp"

#include <algorithm>

#include "premeasure/errors.hpp"

namespace premeasure {

namespace {

constexpr int kMaxPrefixLength = 62;

bool is_pow2(std::int64_t d) { return d > 0 && (d & (d - 1)) == 0; }

void check_cantor_run(const Interval& iv) {
  if (!is_pow2(iv.lo.denominator()) || !is_pow2(iv.hi.denominator()) || iv.lo < 0 || iv.hi > 1) {
    throw Error(ErrorCode::kPreconditionViolation,
                "cantor run [" + iv.lo.to_string() + "," + iv.hi.to_string() + ") is not dyadic in [0,1]");
  }
}

// Sorted closed hulls, merged when they overlap or touch.
std::vector<Interval> merged_hulls(std::span<const Interval> runs) {
  std::vector<Interval> out;
  for (const auto& r : runs) {
    if (!out.empty() && r.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, r.hi);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n') continue;
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == '+' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur.push_back(ch);
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string_view space_kind_name(SpaceKind kind) {
  return kind == SpaceKind::kRationalLine ? "rational-line" : "cantor";
}

Interval cylinder_interval(std::string_view prefix) {
  if (prefix.size() > kMaxPrefixLength) {
    throw Error(ErrorCode::kPreconditionViolation, "prefix longer than 62 bits");
  }
  std::int64_t value = 0;
  for (char ch : prefix) {
    if (ch != '0' && ch != '1') throw Error(ErrorCode::kPreconditionViolation, "prefix must be binary");
    value = value * 2 + (ch - '0');
  }
  const std::int64_t den = std::int64_t{1} << prefix.size();
  return {Rational(value, den), Rational(value + 1, den)};
}

std::vector<Interval> OpenRegion::canonical(SpaceKind kind, std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& iv) { return !(iv.lo < iv.hi); });
  std::sort(parts.begin(), parts.end());
  std::vector<Interval> out;
  out.reserve(parts.size());
  for (auto& iv : parts) {
    if (kind == SpaceKind::kCantor) check_cantor_run(iv);
    bool fuse = !out.empty() && (kind == SpaceKind::kCantor ? iv.lo <= out.back().hi : iv.lo < out.back().hi);
    if (fuse) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

OpenRegion OpenRegion::empty(SpaceKind kind) { return OpenRegion(kind, {}); }

OpenRegion OpenRegion::line(std::vector<Interval> parts) {
  return OpenRegion(SpaceKind::kRationalLine, canonical(SpaceKind::kRationalLine, std::move(parts)));
}

OpenRegion OpenRegion::interval(const Rational& lo, const Rational& hi) { return line({{lo, hi}}); }

OpenRegion OpenRegion::cantor(std::vector<Interval> parts) {
  return OpenRegion(SpaceKind::kCantor, canonical(SpaceKind::kCantor, std::move(parts)));
}

OpenRegion OpenRegion::cylinder(std::string_view prefix) { return cantor({cylinder_interval(prefix)}); }

OpenRegion OpenRegion::cylinders(const std::vector<std::string>& prefixes) {
  std::vector<Interval> parts;
  parts.reserve(prefixes.size());
  for (const auto& p : prefixes) parts.push_back(cylinder_interval(p));
  return cantor(std::move(parts));
}

OpenRegion OpenRegion::whole_cantor() { return cylinder(""); }

OpenRegion OpenRegion::parse(SpaceKind kind, std::string_view literal) {
  std::vector<Interval> parts;
  for (const auto& tok : split_top_level(literal)) {
    if (tok == "{}" || tok.empty()) continue;
    if (kind == SpaceKind::kRationalLine) {
      auto comma = tok.find(',');
      if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')' || comma == std::string::npos) {
        throw Error(ErrorCode::kPreconditionViolation, "bad interval literal '" + tok + "'");
      }
      Interval iv{Rational::parse(tok.substr(1, comma - 1)), Rational::parse(tok.substr(comma + 1, tok.size() - comma - 2))};
      if (!(iv.lo < iv.hi)) throw Error(ErrorCode::kPreconditionViolation, "empty interval literal '" + tok + "'");
      parts.push_back(iv);
    } else {
      if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']') {
        throw Error(ErrorCode::kPreconditionViolation, "bad cylinder literal '" + tok + "'");
      }
      parts.push_back(cylinder_interval(std::string_view(tok).substr(1, tok.size() - 2)));
    }
  }
  return kind == SpaceKind::kRationalLine ? line(std::move(parts)) : cantor(std::move(parts));
}

std::vector<std::string> OpenRegion::prefixes() const {
  if (kind_ != SpaceKind::kCantor) throw Error(ErrorCode::kPreconditionViolation, "prefixes() on a line region");
  std::vector<std::string> out;
  for (const auto& part : parts_) {
    Rational x = part.lo;
    while (x < part.hi) {
      int len = 0;
      for (; len <= kMaxPrefixLength; ++len) {
        const std::int64_t den = std::int64_t{1} << len;
        if (x.denominator() <= den && x + Rational(1, den) <= part.hi) break;
      }
      const std::int64_t den = std::int64_t{1} << len;
      std::int64_t value = x.numerator() * (den / x.denominator());
      std::string bits(len, '0');
      for (int i = len - 1; i >= 0; --i, value >>= 1) bits[i] = static_cast<char>('0' + (value & 1));
      out.push_back(std::move(bits));
      x = x + Rational(1, den);
    }
  }
  return out;
}

bool OpenRegion::contains(const Rational& point) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), point,
                             [](const Rational& p, const Interval& iv) { return p < iv.hi; });
  if (it == parts_.end()) return false;
  return kind_ == SpaceKind::kCantor ? it->lo <= point : it->lo < point;
}

std::string OpenRegion::to_string() const {
  if (parts_.empty()) return "{}";
  std::string out;
  if (kind_ == SpaceKind::kRationalLine) {
    for (const auto& iv : parts_) {
      if (!out.empty()) out += "+";
      out += "(" + iv.lo.to_string() + "," + iv.hi.to_string() + ")";
    }
  } else {
    for (const auto& p : prefixes()) {
      if (!out.empty()) out += "+";
      out += "[" + p + "]";
    }
  }
  return out;
}

OpenRegion meet(const OpenRegion& a, const OpenRegion& b) {
  std::vector<Interval> out;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    Interval iv{std::max(pa[i].lo, pb[j].lo), std::min(pa[i].hi, pb[j].hi)};
    if (iv.lo < iv.hi) out.push_back(iv);
    if (pa[i].hi < pb[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return a.kind() == SpaceKind::kRationalLine ? OpenRegion::line(std::move(out)) : OpenRegion::cantor(std::move(out));
}

OpenRegion join(const OpenRegion& a, const OpenRegion& b) {
  std::vector<Interval> parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return a.kind() == SpaceKind::kRationalLine ? OpenRegion::line(std::move(parts)) : OpenRegion::cantor(std::move(parts));
}

OpenRegion minus_closures(const OpenRegion& a, std::span<const Interval> sorted_runs) {
  // Closed hulls on the line and clopen runs in Cantor space trim the same way.
  const auto holes = merged_hulls(sorted_runs);
  std::vector<Interval> out;
  std::size_t h = 0;
  for (const auto& part : a.parts()) {
    while (h < holes.size() && holes[h].hi < part.lo) ++h;
    Rational cursor = part.lo;
    std::size_t k = h;
    for (; k < holes.size() && holes[k].lo < part.hi; ++k) {
      if (cursor < holes[k].lo) out.push_back({cursor, holes[k].lo});
      cursor = std::max(cursor, holes[k].hi);
    }
    if (cursor < part.hi) out.push_back({cursor, part.hi});
  }
  return a.kind() == SpaceKind::kRationalLine ? OpenRegion::line(std::move(out)) : OpenRegion::cantor(std::move(out));
}

OpenRegion minus_closure(const OpenRegion& a, const OpenRegion& b) { return minus_closures(a, b.parts()); }

OpenRegion regularize(const OpenRegion& a) {
  if (a.kind() == SpaceKind::kCantor) return a;
  std::vector<Interval> out;
  for (const auto& iv : a.parts()) {
    if (!out.empty() && out.back().hi == iv.lo) {
      out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return OpenRegion::line(std::move(out));
}

bool is_subset(const OpenRegion& a, const OpenRegion& b) {
  const auto& pb = b.parts();
  for (const auto& iv : a.parts()) {
    auto it = std::upper_bound(pb.begin(), pb.end(), iv.lo,
                               [](const Rational& p, const Interval& c) { return p < c.hi; });
    if (it == pb.end() || iv.lo < it->lo || it->hi < iv.hi) return false;
  }
  return true;
}

bool closure_strictly_inside(const OpenRegion& a, const OpenRegion& b) {
  if (b.is_empty()) return false;
  if (a.kind() == SpaceKind::kCantor) return is_subset(a, b) && !(a == b);
  const auto& pb = b.parts();
  for (const auto& iv : a.parts()) {
    auto it = std::upper_bound(pb.begin(), pb.end(), iv.lo,
                               [](const Rational& p, const Interval& c) { return p < c.hi; });
    if (it == pb.end() || !(it->lo < iv.lo) || !(iv.hi < it->hi)) return false;
  }
  return true;
}

bool is_disjoint(const OpenRegion& a, const OpenRegion& b) { return meet(a, b).is_empty(); }

BoundaryDescriptor boundary_of(const OpenRegion& a) {
  BoundaryDescriptor out{a.kind(), {}};
  if (a.kind() == SpaceKind::kCantor) return out;
  for (const auto& iv : a.parts()) {
    if (out.points.empty() || out.points.back() != iv.lo) out.points.push_back(iv.lo);
    out.points.push_back(iv.hi);
  }
  return out;
}

}  // namespace premeasure
