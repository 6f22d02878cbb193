// Copyright 2026 The CrowdSense Authors
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

#ifndef CROWDSENSE_ERROR_HPP_
#define CROWDSENSE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace crowdsense {

// Numerical failure inside a solver or evaluator (divergence, SVD failure,
// undefined ratio). Distinct from std::invalid_argument, which is reserved
// for contract violations in the inputs.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system level failure; the message names the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crowdsense

#endif  // CROWDSENSE_ERROR_HPP_
