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

#include <string>
#include <vector>

#include <json.hpp>

#include "premeasure/scheduler.hpp"
#include "premeasure/verifier.hpp"

namespace premeasure::report {

using Json = nlohmann::ordered_json;

/// {"mantissa": "<decimal>", "scale": s}; the mantissa is a string because it
/// outgrows 64 bits.
Json mass_json(const DyadicMass& m);
Json stage_json(const Stage& stage);
std::string stage_csv_rows(const Stage& stage);
std::string stage_csv_header();
Json schedule_json(const Schedule& schedule);
std::string schedule_csv(const Schedule& schedule);
Json boundary_json(const BoundaryBoundCertificate& cert);
Json partition_json(const PartitionCertificate& cert, const Trace& trace);

}  // namespace premeasure::report
