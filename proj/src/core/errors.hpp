// Copyright 2026 The epsaudit Authors
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

#ifndef EPSAUDIT_CORE_ERRORS_HPP_
#define EPSAUDIT_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace epsaudit {

// The histogram estimators only come with guarantees when the claimed
// Lipschitz constant satisfies C < 2/W^2. Outside that region no sampling
// plan exists and callers must fall back to practical (no-guarantee) mode.
class InapplicableError : public std::runtime_error {
 public:
  explicit InapplicableError(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised when no sample count below the search cap satisfies the plan
// inequality. Distinct from InapplicableError: a guaranteed plan exists but the
// requested precision/confidence is out of reach at desk scale.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_ERRORS_HPP_
