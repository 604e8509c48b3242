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

#include <functional>
#include <optional>

#include "premeasure/errors.hpp"
#include "premeasure/region.hpp"

namespace premeasure::testing {

inline std::optional<ErrorCode> error_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline OpenRegion L(const char* s) { return OpenRegion::parse(SpaceKind::kRationalLine, s); }
inline OpenRegion C(const char* s) { return OpenRegion::parse(SpaceKind::kCantor, s); }

}  // namespace premeasure::testing
