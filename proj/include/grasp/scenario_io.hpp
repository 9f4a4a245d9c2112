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

#ifndef GRASP_SCENARIO_IO_HPP_
#define GRASP_SCENARIO_IO_HPP_

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "grasp/simulator.hpp"

namespace grasp {

// Parse or validation failure, anchored to a 1-based line of the source
// (0 when no line applies).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string source, int line, std::string key, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::string source_;
  int line_;
  std::string key_;
};

// Replaces "section.field" with a YAML scalar or flow sequence before the
// document is interpreted.
struct ScenarioOverride {
  std::string key;
  std::string value;
};

enum class RangeChecks { kEnforce, kSkip };

// Scenario files are YAML with sections plant, surface, wrist, sensor,
// policy, setpoints and run. Unknown keys are rejected; surface geometry,
// surface.stiffness and run.duration are required, every other field has
// a default. See README.md for the full schema.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>",
                        std::span<const ScenarioOverride> overrides = {},
                        RangeChecks checks = RangeChecks::kEnforce);

Scenario load_scenario(const std::filesystem::path& path,
                       std::span<const ScenarioOverride> overrides = {},
                       RangeChecks checks = RangeChecks::kEnforce);

// Emits every field, doubles in shortest round-trip form, so that
// parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace grasp

#endif  // GRASP_SCENARIO_IO_HPP_
