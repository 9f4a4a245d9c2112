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

#ifndef GRASP_VALIDATION_HPP_
#define GRASP_VALIDATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "grasp/policy.hpp"

namespace grasp {

struct InvariantResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured worst case
  double threshold = 0.0;  // bound the value must stay under
  std::string detail;

  // threshold - value; negative when violated.
  double margin() const { return threshold - value; }
};

struct ValidationOptions {
  PolicyParams policy;
  // Parameter problems found while loading an injected configuration.
  std::vector<std::string> config_violations;
  std::uint64_t seed = 20260101;
};

// Cross-module invariant checks: frame round trips, Moore-Penrose and
// null-space identities, two-link skew symmetry and energy, surface
// gradients and projections, gate shape, error decay, tangency and the
// planar cross-backend comparison.
std::vector<InvariantResult> run_invariant_suite(const ValidationOptions& options = {});

// One "PASS|FAIL name value=.. threshold=.. margin=.. detail" line each.
std::string format_report(const std::vector<InvariantResult>& results);

}  // namespace grasp

#endif  // GRASP_VALIDATION_HPP_
