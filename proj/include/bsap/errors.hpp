// Copyright 2026 The bsap Authors
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
#pragma once

#include <stdexcept>
#include <string>

namespace bsap {

/// Raised when a request would exceed the dense-simulation size limits
/// (statevector or dense-matrix memory guards).
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a state leaves the subspace an operation requires.
class SubspaceViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void fail(const std::string &what) {
    throw std::invalid_argument(what);
}
inline void require(bool cond, const std::string &what) {
    if (!cond) {
        fail(what);
    }
}
} // namespace detail

} // namespace bsap
