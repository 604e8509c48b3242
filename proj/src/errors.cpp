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

#include "premeasure/errors.hpp"

namespace premeasure {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPreconditionViolation: return "PreconditionViolation";
    case ErrorCode::kNotABasisElement: return "NotABasisElement";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kScanExhausted: return "ScanExhausted";
    case ErrorCode::kInfeasibleCover: return "InfeasibleCover";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kDuplicateInsertion: return "DuplicateInsertion";
    case ErrorCode::kNotRepresentable: return "NotRepresentable";
    case ErrorCode::kStageMismatch: return "StageMismatch";
    case ErrorCode::kUnknownCell: return "UnknownCell";
    case ErrorCode::kConsistencyViolation: return "ConsistencyViolation";
    case ErrorCode::kEmptyStage: return "EmptyStage";
    case ErrorCode::kStageTooEarly: return "StageTooEarly";
    case ErrorCode::kChainViolation: return "ChainViolation";
    case ErrorCode::kDecayViolation: return "DecayViolation";
    case ErrorCode::kAdditivityViolation: return "AdditivityViolation";
    case ErrorCode::kInsufficientDepth: return "InsufficientDepth";
    case ErrorCode::kMembershipViolation: return "MembershipViolation";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool Error::is_violation() const noexcept {
  switch (code_) {
    case ErrorCode::kInvariantViolation:
    case ErrorCode::kConsistencyViolation:
    case ErrorCode::kChainViolation:
    case ErrorCode::kDecayViolation:
    case ErrorCode::kAdditivityViolation:
    case ErrorCode::kMembershipViolation:
      return true;
    default:
      return false;
  }
}

}  // namespace premeasure
