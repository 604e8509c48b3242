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

#include "premeasure/verifier.hpp"

#include <algorithm>

#include "premeasure/errors.hpp"
#include "premeasure/mass.hpp"

namespace premeasure {

namespace {

std::string at_j(std::uint64_t i, std::uint64_t j) {
  return "(i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
}

std::string element_text(const RingElement& d) {
  std::string out = "stage " + std::to_string(d.stage) + " cells {";
  for (std::size_t q = 0; q < d.cells.size(); ++q) out += (q ? "," : "") + std::to_string(d.cells[q]);
  out += "} points {";
  for (std::size_t q = 0; q < d.points.size(); ++q) out += (q ? "," : "") + d.points[q].to_string();
  return out + "}";
}

DyadicMass pow2(std::int64_t e) {  // 2^e for e <= 0
  return DyadicMass::pow2_neg(static_cast<std::uint64_t>(-e));
}

}  // namespace

RingElement random_element(const Stage& stage, std::mt19937_64& rng, std::size_t max_cells) {
  RingElement d;
  d.stage = stage.index();
  const std::size_t n = stage.cell_count();
  if (n > 0) {
    const std::size_t width = std::min(n, max_cells);
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, n - width)(rng);
    for (std::size_t c = start; c < start + width; ++c) {
      if (rng() & 1) d.cells.push_back(static_cast<CellId>(c));
    }
  }
  const auto support = stage.boundary_support().points;
  if (!support.empty()) {
    const std::size_t count = rng() % 4;
    for (std::size_t q = 0; q < count; ++q) d.points.push_back(support[rng() % support.size()]);
    std::sort(d.points.begin(), d.points.end());
    d.points.erase(std::unique(d.points.begin(), d.points.end()), d.points.end());
  }
  return d;
}

BoundaryBoundCertificate certify_boundary(const Schedule& schedule, const Trace& trace, std::uint64_t i,
                                          std::uint64_t j_max) {
  for (std::uint64_t j = 1; j <= j_max; ++j) schedule.block(i, j);
  const StagePtr last = trace.last();
  const Stage& s = *last;
  BoundaryBoundCertificate cert;
  cert.i = i;
  cert.j_max = j_max;
  cert.evaluated_stage = s.index();
  const auto points = schedule.space.boundary(schedule.space.enumerate(i)).points;

  for (std::uint64_t j = 1; j <= j_max; ++j) {
    const OpenRegion cover = schedule.cover_region(i, j);
    for (const auto& p : points) {
      if (!cover.contains(p)) throw Error(ErrorCode::kChainViolation, at_j(i, j) + ": cover misses boundary point " + p.to_string());
    }
    if (j > 1) {
      const OpenRegion allowed = minus_closures(schedule.cover_region(i, j - 1), schedule.hole_runs(i, j));
      if (!is_subset(cover, allowed)) throw Error(ErrorCode::kChainViolation, at_j(i, j) + ": cover leaves the previous cover minus holes");
    }
    ChainLink link{j, kappa(s, cover_union(schedule, i, j, s)), std::nullopt};
    if (schedule.has_block(i, j + 1)) {
      const OpenRegion trimmed = minus_closures(cover, schedule.hole_runs(i, j + 1));
      link.after_holes = kappa(s, decompose(trimmed, s));
      if (*link.after_holes != link.bound.half()) {
        throw Error(ErrorCode::kChainViolation, at_j(i, j) + ": holes remove " + link.after_holes->to_string() + " of " +
                                                    link.bound.to_string() + ", not exactly half");
      }
    }
    if (j > 1) {
      const DyadicMass& prev = cert.chain.back().bound;
      if (link.bound > prev.half()) {
        throw Error(ErrorCode::kChainViolation, at_j(i, j) + ": " + link.bound.to_string() + " > half of " + prev.to_string());
      }
      const DyadicMass& first = cert.chain.front().bound;
      if (link.bound > DyadicMass(first.mantissa(), first.scale() + (j - 1))) {
        throw Error(ErrorCode::kChainViolation, at_j(i, j) + ": above bound_1 * 2^(1-j)");
      }
    }
    cert.chain.push_back(std::move(link));
  }
  cert.final_bound = cert.chain.back().bound;
  return cert;
}

DyadicMass certify_max_decay(const Schedule& schedule, const Trace& trace, std::uint64_t m) {
  const std::uint64_t n = schedule.block(1, m).g;
  const StagePtr s = trace.stage(n);
  const DyadicMass mx = max_cell_mass(*s);
  if (mx > pow2(1 - static_cast<std::int64_t>(m)) || mx != DyadicMass::pow2_neg(trace.reports()[n - 1].min_exponent_after)) {
    throw Error(ErrorCode::kDecayViolation, "max cell mass " + mx.to_string() + " at stage " + std::to_string(n) +
                                                " exceeds 2^(1-" + std::to_string(m) + ")");
  }
  return mx;
}

AdditivityReport check_additivity(const Stage& stage, std::size_t sample_count, std::uint64_t seed) {
  if (stage.cell_count() < 2) throw Error(ErrorCode::kPreconditionViolation, "additivity needs at least two cells");
  std::mt19937_64 rng(seed);
  AdditivityReport rep{stage.index(), seed, 0, 0, 0};
  auto fail = [&](const std::string& what, const RingElement& a, const RingElement& b) {
    return Error(ErrorCode::kAdditivityViolation, what + " (seed " + std::to_string(seed) + ") d1=" + element_text(a) +
                                                      " d2=" + element_text(b));
  };
  for (std::size_t s = 0; s < sample_count; ++s) {
    // Disjoint pair: split a random element in two.
    const RingElement base = random_element(stage, rng);
    RingElement d1{stage.index(), {}, {}};
    RingElement d2{stage.index(), {}, {}};
    for (CellId c : base.cells) (rng() & 1 ? d1 : d2).cells.push_back(c);
    for (const auto& p : base.points) (rng() & 1 ? d1 : d2).points.push_back(p);
    const RingElement both = ring_union(d1, d2);
    if (!(both == base) || kappa(stage, both) != kappa(stage, d1) + kappa(stage, d2)) {
      throw fail("kappa(d1 + d2) != kappa(d1) + kappa(d2)", d1, d2);
    }
    for (CellId c : base.cells) {
      const auto& piece = stage.pieces()[stage.piece_indices(c).front()];
      const Rational probe = midpoint(piece.lo, piece.hi);
      if (ring_contains(both, stage, probe) != (ring_contains(d1, stage, probe) || ring_contains(d2, stage, probe))) {
        throw fail("union disagrees with pointwise membership at " + probe.to_string(), d1, d2);
      }
    }
    ++rep.disjoint_pairs;

    // Boundary-only partner weighs nothing.
    const RingElement pts{stage.index(), {}, base.points};
    const RingElement open_only{stage.index(), base.cells, {}};
    if (kappa(stage, pts) != DyadicMass::zero() || kappa(stage, ring_union(open_only, pts)) != kappa(stage, open_only)) {
      throw fail("boundary points carry mass", open_only, pts);
    }
    ++rep.boundary_only;

    // Finite cover: every cell of base lands in at least one of r pieces.
    const std::size_t r = 2 + rng() % 3;
    std::vector<RingElement> pieces(r, RingElement{stage.index(), {}, {}});
    for (CellId c : base.cells) {
      pieces[rng() % r].cells.push_back(c);
      if (rng() % 4 == 0) pieces[rng() % r].cells.push_back(c);
    }
    for (const auto& p : base.points) pieces[rng() % r].points.push_back(p);
    DyadicMass sum;
    RingElement covered{stage.index(), {}, {}};
    for (auto& pc : pieces) {
      std::sort(pc.cells.begin(), pc.cells.end());
      pc.cells.erase(std::unique(pc.cells.begin(), pc.cells.end()), pc.cells.end());
      std::sort(pc.points.begin(), pc.points.end());
      sum += kappa(stage, pc);
      covered = ring_union(covered, pc);
    }
    if (!ring_difference(base, covered).is_empty() || kappa(stage, base) > sum) {
      throw fail("kappa(d) exceeds the kappa-sum of a finite cover", base, covered);
    }
    ++rep.covers;
  }
  return rep;
}

PartitionCertificate build_partition(const Schedule& schedule, const Trace& trace, const DyadicMass& epsilon) {
  if (epsilon.is_zero()) throw Error(ErrorCode::kPreconditionViolation, "epsilon must be positive");
  PartitionCertificate cert;
  cert.epsilon = epsilon;
  cert.m = 1;
  while (pow2(1 - static_cast<std::int64_t>(cert.m)) > epsilon) ++cert.m;
  if (!schedule.has_block(1, cert.m)) {
    throw Error(ErrorCode::kInsufficientDepth, "epsilon " + epsilon.to_string() + " needs m=" + std::to_string(cert.m) +
                                                   " but the schedule stops at depth " + std::to_string(schedule.depth));
  }
  certify_max_decay(schedule, trace, cert.m);
  cert.stage = schedule.block(1, cert.m).g;
  const StagePtr s = trace.stage(cert.stage);
  cert.largest_piece = max_cell_mass(*s);
  for (CellId c = 0; c < s->cell_count(); ++c) cert.cells.push_back({c, s->mass(c)});
  cert.tail_bound = tail_budget(*s);
  cert.largest_piece = std::max(cert.largest_piece, cert.tail_bound);

  const StagePtr w = trace.last();
  cert.witness_stage = w->index();
  const auto& pieces = w->pieces();
  for (const auto& p : s->boundary_support().points) {
    PointPiece pp{p, DyadicMass::one()};
    auto right = std::lower_bound(pieces.begin(), pieces.end(), p,
                                  [](const detail::Piece& q, const Rational& x) { return q.lo < x; });
    if (right != pieces.end() && right != pieces.begin() && right->lo == p && std::prev(right)->hi == p) {
      RingElement around{w->index(), {std::prev(right)->cell, right->cell}, {}};
      std::sort(around.cells.begin(), around.cells.end());
      const RingElement nbhd = decompose(regularize(open_region(around, *w)), *w);
      if (ring_contains(nbhd, *w, p)) pp.bound = kappa(*w, nbhd);
    }
    cert.largest_piece = std::max(cert.largest_piece, pp.bound);
    cert.boundary_points.push_back(std::move(pp));
  }
  for (std::uint64_t i = 1; schedule.has_block(i, 1); ++i) {
    std::uint64_t j_max = 1;
    while (schedule.has_block(i, j_max + 1)) ++j_max;
    cert.boundary_chains.push_back(certify_boundary(schedule, trace, i, j_max));
  }
  return cert;
}

PermutationReport check_permutation_invariance(SpaceKind kind, const std::vector<OpenRegion>& prefix,
                                               const std::vector<std::size_t>& permutation,
                                               const std::vector<OpenRegion>& probes) {
  if (prefix.size() > 8) throw Error(ErrorCode::kPreconditionViolation, "prefix longer than 8 sets");
  std::vector<std::size_t> sorted = permutation;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t q = 0; q < sorted.size(); ++q) {
    if (sorted.size() != prefix.size() || sorted[q] != q) throw Error(ErrorCode::kPreconditionViolation, "not a permutation of the prefix");
  }
  auto run = [&](const std::vector<std::size_t>& order) {
    StageBuilder b(kind);
    std::vector<StagePtr> stages;
    for (std::size_t q : order) {
      b.refine({q + 1, prefix[q]});
      stages.push_back(b.snapshot());
    }
    return stages;
  };
  std::vector<std::size_t> identity(prefix.size());
  for (std::size_t q = 0; q < identity.size(); ++q) identity[q] = q;
  const auto original = run(identity);
  const auto permuted = run(permutation);
  auto representable = [](const std::vector<StagePtr>& stages, const OpenRegion& r) {
    for (const auto& s : stages) {
      try {
        decompose(r, *s);
        return true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNotRepresentable) throw;
      }
    }
    return false;
  };
  PermutationReport rep{permutation, probes.size(), 0, 0};
  for (const auto& r : probes) {
    const bool a = representable(original, r);
    const bool b = representable(permuted, r);
    if (a != b) {
      throw Error(ErrorCode::kMembershipViolation, r.to_string() + (a ? " is" : " is not") + " representable in the original run but" +
                                                       (b ? " is" : " is not") + " in the permuted run");
    }
    if (!a) continue;
    ++rep.representable;
    try {
      if (kappa(*original.back(), decompose(r, *original.back())) == kappa(*permuted.back(), decompose(r, *permuted.back()))) {
        ++rep.kappa_agree;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotRepresentable) throw;
    }
  }
  return rep;
}

ConservationReport check_conservation(const Trace& trace) {
  ConservationReport rep;
  for (const auto& r : trace.reports()) {
    if (r.split_parent_sum != r.split_children_sum) {
      throw Error(ErrorCode::kInvariantViolation, "split children do not sum to their parents at stage " + std::to_string(r.stage));
    }
    const DyadicMass expected = r.new_region ? DyadicMass::pow2_neg(r.stage) : DyadicMass::zero();
    if (r.grant != expected) {
      throw Error(ErrorCode::kInvariantViolation, "stage " + std::to_string(r.stage) + " grants " + r.grant.to_string());
    }
    ++rep.steps;
    rep.splits += r.splits;
    rep.grants += r.new_region ? 1 : 0;
  }
  std::vector<std::uint64_t> stages = trace.checkpoint_indices();
  if (trace.size() > 0) stages.push_back(trace.size());
  std::size_t grants_seen = 0;
  std::size_t report_grants = 0;
  std::uint64_t upto = 0;
  for (std::uint64_t k : stages) {
    const StagePtr s = trace.stage(k);
    for (; upto < k; ++upto) report_grants += trace.reports()[upto].new_region ? 1 : 0;
    grants_seen = s->grants().size();
    const DyadicMass total = s->total_mass();
    if (grants_seen != report_grants || s->cell_mass_sum() != total || total + tail_budget(*s) > DyadicMass::one()) {
      throw Error(ErrorCode::kInvariantViolation, "stage " + std::to_string(k) + " total " + total.to_string() + " vs cell sum " +
                                                      s->cell_mass_sum().to_string());
    }
    ++rep.resummed_stages;
  }
  return rep;
}

ConsistencyReport check_consistency(const Trace& trace, std::uint64_t window, std::size_t per_stage, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConsistencyReport rep;
  const std::uint64_t w = std::min(window, trace.size());
  std::vector<StagePtr> stages;
  for (std::uint64_t k = 1; k <= w; ++k) stages.push_back(trace.stage(k));
  for (std::uint64_t k = 1; k <= w; ++k) {
    for (std::size_t q = 0; q < per_stage; ++q) {
      const RingElement d = random_element(*stages[k - 1], rng);
      kappa_lifted(std::span<const StagePtr>(stages).subspan(k - 1), d);
      ++rep.elements;
      rep.evaluations += w - k + 1;
    }
  }
  // Sparse long-range lifts from later snapshots to the last stage.
  const StagePtr last = trace.last();
  for (std::uint64_t k : trace.checkpoint_indices()) {
    if (k <= w) continue;
    const StagePtr s = trace.stage(k);
    const std::vector<StagePtr> pair{s, last};
    for (int q = 0; q < 4; ++q) {
      kappa_lifted(std::span<const StagePtr>(pair), random_element(*s, rng));
      ++rep.elements;
      rep.evaluations += 2;
    }
  }
  return rep;
}

void check_positivity(const Trace& trace, std::uint64_t count) {
  for (std::uint64_t p = 1; p <= std::min(count, trace.size()); ++p) {
    const StagePtr s = trace.stage(p);
    const DyadicMass k = kappa(*s, decompose(s->inserted(p).region, *s));
    if (k.is_zero()) throw Error(ErrorCode::kInvariantViolation, "W_" + std::to_string(p) + " has zero mass at its insertion stage");
  }
}

}  // namespace premeasure
