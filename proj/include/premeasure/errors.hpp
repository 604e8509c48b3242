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

#include <stdexcept>
#include <string>
#include <string_view>

namespace premeasure {

enum class ErrorCode {
  kPreconditionViolation,
  kNotABasisElement,
  kEmptyRegion,
  kScanExhausted,
  kInfeasibleCover,
  kInvariantViolation,
  kDuplicateInsertion,
  kNotRepresentable,
  kStageMismatch,
  kUnknownCell,
  kConsistencyViolation,
  kEmptyStage,
  kStageTooEarly,
  kChainViolation,
  kDecayViolation,
  kAdditivityViolation,
  kInsufficientDepth,
  kMembershipViolation,
  kConfigError,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for the codes that mean "the construction itself was falsified".
  bool is_violation() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace premeasure
