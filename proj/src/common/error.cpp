// Copyright 2026 The uqnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uqnet/common/error.hpp"

#include <string>

namespace uqnet {

void require_same_dimension(const char* what, long expected, long actual) {
  if (expected != actual) {
    throw invalid_argument("dimension_mismatch",
                           std::string(what) + ": expected dimension " + std::to_string(expected) +
                               ", got " + std::to_string(actual),
                           {{"expected", std::to_string(expected)}, {"actual", std::to_string(actual)}});
  }
}

}  // namespace uqnet
