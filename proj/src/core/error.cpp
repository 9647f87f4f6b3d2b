/*
 * Copyright 2026 The expresslog Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/error.hpp"

namespace exl {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kState: return "invalid-state";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUnavailable: return "unavailable";
    case ErrorCode::kCheckFailed: return "check-failed";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

namespace {

std::string join_diagnostics(const std::vector<std::string>& diagnostics) {
  std::string out = "schema validation failed";
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    out += i == 0 ? ": " : "; ";
    out += diagnostics[i];
  }
  return out;
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> diagnostics)
    : Error(ErrorCode::kInvalidArgument, join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

}  // namespace exl
