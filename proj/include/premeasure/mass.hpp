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

#include <optional>
#include <span>

#include "premeasure/dyadic.hpp"
#include "premeasure/stage.hpp"

namespace premeasure {

/// μ_k of a cell; nullopt is the empty-set sentinel with μ = 0.
DyadicMass mu(const Stage& stage, const std::optional<CellSignature>& signature);
DyadicMass mu(const Stage& stage, CellId cell);

/// κ_n(B ⊎ C) = Σ μ_n over the cells of B; the point part weighs nothing.
DyadicMass kappa(const Stage& stage, const RingElement& d);

/// Evaluates d (given at stages.front()) at every stage of `stages` after
/// re-decomposing its point set; throws ConsistencyViolation on disagreement.
DyadicMass kappa_lifted(std::span<const StagePtr> stages, const RingElement& d);
/// Same over trace stages d.stage..last.
DyadicMass kappa_lifted(const Trace& trace, const RingElement& d, std::uint64_t last);

DyadicMass max_cell_mass(const Stage& stage);
/// 2^(-k): all mass any continuation can still grant outside the inserted sets.
DyadicMass tail_budget(const Stage& stage);

}  // namespace premeasure
