// Copyright 2026 The grasp-policy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRASP_ERRORS_HPP_
#define GRASP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace grasp {

// Arithmetic between quantities tagged with different frames.
class FrameMismatchError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A Jacobian (or surface gradient) is too close to rank loss to invert.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grasp

#endif  // GRASP_ERRORS_HPP_
