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

#include "premeasure/mass.hpp"

#include "premeasure/errors.hpp"

namespace premeasure {

DyadicMass mu(const Stage& stage, const std::optional<CellSignature>& signature) {
  if (!signature) return DyadicMass::zero();
  auto c = stage.find(*signature);
  if (!c) throw Error(ErrorCode::kUnknownCell, "no cell " + signature->flags + " at stage " + std::to_string(stage.index()));
  return stage.mass(*c);
}

DyadicMass mu(const Stage& stage, CellId cell) { return stage.mass(cell); }

DyadicMass kappa(const Stage& stage, const RingElement& d) {
  if (d.stage != stage.index()) {
    throw Error(ErrorCode::kStageMismatch, "element of stage " + std::to_string(d.stage) + " evaluated at stage " + std::to_string(stage.index()));
  }
  DyadicSum sum;
  for (CellId c : d.cells) sum.add(stage.mass(c));
  return sum.value();
}

DyadicMass kappa_lifted(std::span<const StagePtr> stages, const RingElement& d) {
  if (stages.empty()) throw Error(ErrorCode::kPreconditionViolation, "no stages to evaluate on");
  const Stage& first = *stages.front();
  const DyadicMass value = kappa(first, d);
  for (const auto& s : stages.subspan(1)) {
    const DyadicMass later = kappa(*s, lift(d, first, *s));
    if (later != value) {
      throw Error(ErrorCode::kConsistencyViolation, "kappa " + value.to_string() + " at stage " + std::to_string(first.index()) +
                                                        " but " + later.to_string() + " at stage " + std::to_string(s->index()));
    }
  }
  return value;
}

DyadicMass kappa_lifted(const Trace& trace, const RingElement& d, std::uint64_t last) {
  std::vector<StagePtr> stages;
  for (std::uint64_t n = d.stage; n <= last; ++n) stages.push_back(trace.stage(n));
  return kappa_lifted(std::span<const StagePtr>(stages), d);
}

DyadicMass max_cell_mass(const Stage& stage) {
  if (stage.cell_count() == 0) throw Error(ErrorCode::kEmptyStage, "stage " + std::to_string(stage.index()) + " has no cells");
  return DyadicMass::pow2_neg(stage.min_exponent());
}

DyadicMass tail_budget(const Stage& stage) { return DyadicMass::pow2_neg(stage.index()); }

}  // namespace premeasure
