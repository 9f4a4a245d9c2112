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

#include "grasp/scenarios.hpp"

#include <numbers>

namespace grasp {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Scenario contact_base() {
  Scenario sc;
  sc.plant.response = VelocityModeConfig::Response::kFirstOrderLag;
  sc.plant.time_constants = {0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
  sc.policy = contact_policy();
  sc.setpoints.F_dze = 5.0;
  sc.run = RunConfig{5.0, 5e-4, 1};
  return sc;
}

}  // namespace

PolicyParams contact_policy() {
  PolicyParams p;
  p.M_d = Vec6::Ones();
  p.B_d << 40.0, 40.0, 40.0, 8.0, 8.0, 8.0;
  p.B_f << 0.04, 0.04, 0.04, 60.0, 60.0, 60.0;
  p.alpha = 0.0;
  p.F_scale = 1.0;
  return p;
}

Eigen::Quaterniond downward_orientation(const Vec3& tilt_axis_ee, double tilt_rad) {
  const Eigen::Quaterniond down(Eigen::AngleAxisd(std::numbers::pi, Vec3::UnitX()));
  if (tilt_rad == 0.0) return down;
  return (down * Eigen::Quaterniond(Eigen::AngleAxisd(tilt_rad, tilt_axis_ee.normalized())))
      .normalized();
}

Scenario plane_align_scenario() {
  Scenario sc = contact_base();
  sc.surface = SurfaceModel::plane(Vec3::Zero(), Vec3::UnitZ(), 5000.0);
  sc.initial_pose.position = Vec3(0.0, 0.0, 0.002);
  sc.initial_pose.orientation = downward_orientation(Vec3::UnitY(), 20.0 * kDeg);
  sc.run.duration = 5.0;
  return sc;
}

Scenario tilted_slide_scenario() {
  Scenario sc = plane_align_scenario();
  sc.initial_pose.orientation = downward_orientation(-Vec3::UnitX(), 20.0 * kDeg);
  sc.setpoints.F_dye = 1.0;
  sc.run.seed = 4;
  return sc;
}

Scenario sphere_slide_scenario() {
  Scenario sc = contact_base();
  const double radius = 0.1, speed = 0.01;
  sc.surface = SurfaceModel::sphere(Vec3::Zero(), radius, 5000.0);
  sc.initial_pose.position = Vec3(0.0, 0.0, radius + 0.0005);
  sc.initial_pose.orientation = downward_orientation(Vec3::UnitY(), 0.0);
  sc.setpoints.v_d =
      Twist{Vec3(0.0, speed, 0.0), Vec3(speed / radius, 0.0, 0.0), Frame::kEndEffector};
  sc.run.duration = 8.0;
  sc.run.seed = 2;
  return sc;
}

Scenario bottle_approach_scenario() {
  Scenario sc = contact_base();
  const Vec3 center(0.0, 0.0, 0.1);
  const Vec3 semi_axes(0.035, 0.035, 0.1);
  sc.surface = SurfaceModel::superellipsoid(center, semi_axes, Eigen::Vector2d(2.0, 6.0), 5000.0);
  // Approach axis along -x toward the bottle side, tilted 20 deg in the
  // vertical plane.
  const Eigen::Quaterniond side(Eigen::AngleAxisd(-std::numbers::pi / 2.0, Vec3::UnitY()));
  sc.initial_pose.orientation =
      (side * Eigen::Quaterniond(Eigen::AngleAxisd(20.0 * kDeg, Vec3::UnitY()))).normalized();
  sc.initial_pose.position = Vec3(0.037, 0.0, center.z());  // 2 mm off the side wall
  sc.run.duration = 6.0;
  sc.run.seed = 3;
  return sc;
}

std::vector<std::string_view> builtin_scenario_names() {
  return {"plane-align", "tilted-slide", "sphere-slide", "bottle-approach"};
}

std::optional<Scenario> builtin_scenario(std::string_view name) {
  if (name == "plane-align") return plane_align_scenario();
  if (name == "tilted-slide") return tilted_slide_scenario();
  if (name == "sphere-slide") return sphere_slide_scenario();
  if (name == "bottle-approach") return bottle_approach_scenario();
  return std::nullopt;
}

}  // namespace grasp
