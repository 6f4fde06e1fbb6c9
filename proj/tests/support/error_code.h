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

#ifndef TECMAP_TESTS_SUPPORT_ERROR_CODE_H_
#define TECMAP_TESTS_SUPPORT_ERROR_CODE_H_

#include <optional>

#include "tecmap/error.h"

namespace tecmap::testing {

// Code of the tecmap::Error thrown by fn, or nullopt when nothing is thrown.
template <typename Fn>
std::optional<ErrorCode> error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace tecmap::testing

#endif  // TECMAP_TESTS_SUPPORT_ERROR_CODE_H_
