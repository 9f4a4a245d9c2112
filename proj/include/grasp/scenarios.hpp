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

#ifndef GRASP_SCENARIOS_HPP_
#define GRASP_SCENARIOS_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "grasp/simulator.hpp"

namespace grasp {

// Gains for stiff (1e3..2e4 N/m) contact behind the 5 Hz sensor filter.
// The library defaults are too aggressive there: the force loop gain
// B_f K must stay below (B_d / M_d) (B_d / M_d + 2 pi f_c).
PolicyParams contact_policy();

// Tool pointing straight down (z_e = -z), then tilted about its own axis.
Eigen::Quaterniond downward_orientation(const Vec3& tilt_axis_ee, double tilt_rad);

// 20 deg tilt about the end-effector y axis, 2 mm above a plane, hold 5 N.
Scenario plane_align_scenario();
// Plane contact tilted 20 deg about the end-effector x axis, so the
// misalignment loads the tangential force, with a 1 N tangential setpoint.
// Sweeping alpha shows the gate holding back the slide until aligned.
Scenario tilted_slide_scenario();
// Slides along the top of a 0.1 m sphere at 1 cm/s while holding 5 N; the
// setpoint twist carries the matching roll rate v / R.
Scenario sphere_slide_scenario();
// Side approach to an upright superellipsoid bottle with alpha = 0 and no
// tangential setpoints: pure alignment.
Scenario bottle_approach_scenario();

std::vector<std::string_view> builtin_scenario_names();
std::optional<Scenario> builtin_scenario(std::string_view name);

}  // namespace grasp

#endif  // GRASP_SCENARIOS_HPP_
