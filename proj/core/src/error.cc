// Copyright 2026 The tecmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tecmap/error.h"

namespace tecmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension:
      return "dimension error";
    case ErrorCode::kOutOfRegion:
      return "out-of-region error";
    case ErrorCode::kDegenerateInput:
      return "degenerate input";
    case ErrorCode::kParameter:
      return "parameter error";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kValidation:
      return "validation error";
    case ErrorCode::kNoObservations:
      return "no observations";
    case ErrorCode::kFit:
      return "fit error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace tecmap
