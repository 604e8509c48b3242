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
#include <optional>
#include <random>
#include <vector>

#include "premeasure/dyadic.hpp"
#include "premeasure/scheduler.hpp"
#include "premeasure/stage.hpp"

namespace premeasure {

struct ChainLink {
  std::uint64_t j = 0;
  DyadicMass bound;                         // κ(∪G_{i,j})
  std::optional<DyadicMass> after_holes;  // κ(∪G_{i,j} minus the closed holes of F_{i,j+1})
};

/// κ*(∂V_i) <= final_bound, witnessed by the cover chain.
struct BoundaryBoundCertificate {
  std::uint64_t i = 0;
  std::uint64_t j_max = 0;
  std::uint64_t evaluated_stage = 0;
  std::vector<ChainLink> chain;
  DyadicMass final_bound;
};

BoundaryBoundCertificate certify_boundary(const Schedule& schedule, const Trace& trace, std::uint64_t i,
                                          std::uint64_t j_max);

/// max_cell_mass at stage g(1,m); throws DecayViolation above 2^(1-m).
DyadicMass certify_max_decay(const Schedule& schedule, const Trace& trace, std::uint64_t m);

struct AdditivityReport {
  std::uint64_t stage = 0;
  std::uint64_t seed = 0;
  std::size_t disjoint_pairs = 0;
  std::size_t boundary_only = 0;
  std::size_t covers = 0;
};

AdditivityReport check_additivity(const Stage& stage, std::size_t sample_count, std::uint64_t seed);

struct PointPiece {
  Rational point;
  DyadicMass bound;  // κ of an open ring neighbourhood at witness_stage
};

struct CellPiece {
  CellId id = 0;
  DyadicMass mass;
};

struct PartitionCertificate {
  DyadicMass epsilon;
  std::uint64_t m = 0;
  std::uint64_t stage = 0;  // g(1,m)
  std::vector<CellPiece> cells;
  DyadicMass tail_bound;
  std::uint64_t witness_stage = 0;
  std::vector<PointPiece> boundary_points;
  std::vector<BoundaryBoundCertificate> boundary_chains;
  DyadicMass largest_piece;

  bool valid() const { return largest_piece <= epsilon; }
};

/// Lemma-4.4 style partition: the cells of stage g(1,m), the part outside
/// every inserted set (bounded by the tail budget) and each boundary point on
/// its own.
PartitionCertificate build_partition(const Schedule& schedule, const Trace& trace, const DyadicMass& epsilon);

struct PermutationReport {
  std::vector<std::size_t> permutation;
  std::size_t probes = 0;
  std::size_t representable = 0;  // in both runs
  std::size_t kappa_agree = 0;    // among those, same κ at the final stage
};

/// Runs `prefix` in its own order and in `permutation` order and checks that
/// each probe is representable at some stage of one run iff of the other.
PermutationReport check_permutation_invariance(SpaceKind kind, const std::vector<OpenRegion>& prefix,
                                               const std::vector<std::size_t>& permutation,
                                               const std::vector<OpenRegion>& probes);

struct ConservationReport {
  std::size_t steps = 0;
  std::size_t splits = 0;
  std::size_t grants = 0;
  std::size_t resummed_stages = 0;
};

/// Every refine step conserves mass; re-sums all cells at every snapshot.
ConservationReport check_conservation(const Trace& trace);

struct ConsistencyReport {
  std::size_t elements = 0;
  std::size_t evaluations = 0;
};

/// Samples `per_stage` elements at each stage 1..window and re-evaluates them
/// at every later stage up to window.
ConsistencyReport check_consistency(const Trace& trace, std::uint64_t window, std::size_t per_stage, std::uint64_t seed);

/// κ(W_p) > 0 at stage p for p = 1..count.
void check_positivity(const Trace& trace, std::uint64_t count);

/// Random element of a stage: up to max_cells cells drawn from a random id
/// window plus a few boundary points.
RingElement random_element(const Stage& stage, std::mt19937_64& rng, std::size_t max_cells = 48);

}  // namespace premeasure
