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

#ifndef GRASP_PLANT_HPP_
#define GRASP_PLANT_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <random>

#include "grasp/kinematics.hpp"
#include "grasp/policy.hpp"

namespace grasp {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct JointState {
  VecX q;
  VecX qdot;
};

// Planar two-link arm with point masses at the link ends. Joint angles are
// measured from the base x axis; gravity acts along -y.
struct TwoLinkModel {
  double m1 = 1.0;  // kg
  double m2 = 1.0;
  double l1 = 1.0;  // m
  double l2 = 1.0;
  double gravity = 9.81;   // m/s^2
  double friction = 0.0;   // viscous, N*m*s/rad

  void validate() const;
};

Mat2 mass_matrix(const TwoLinkModel& model, const Vec2& q);
// Christoffel-consistent factorization: coriolis_matrix(q, qdot) * qdot ==
// coriolis_vector(q, qdot) and Mdot - 2C is skew-symmetric.
Mat2 coriolis_matrix(const TwoLinkModel& model, const Vec2& q, const Vec2& qdot);
Vec2 coriolis_vector(const TwoLinkModel& model, const Vec2& q, const Vec2& qdot);
Vec2 gravity_vector(const TwoLinkModel& model, const Vec2& q);

Vec2 end_effector_position(const TwoLinkModel& model, const Vec2& q);
// 6x2: rows (vx, vy, vz, wx, wy, wz) of the end-effector twist in the base frame.
JacobianMatrix two_link_jacobian(const TwoLinkModel& model, const Vec2& q);
JacobianMatrix two_link_jacobian_dot(const TwoLinkModel& model, const Vec2& q, const Vec2& qdot);

double kinetic_energy(const TwoLinkModel& model, const JointState& state);
double potential_energy(const TwoLinkModel& model, const Vec2& q);

// Bounded uniform torque noise d(t). A zero bound yields exact zeros.
class DisturbanceModel {
 public:
  explicit DisturbanceModel(double bound = 0.0, std::uint64_t seed = 0);

  double bound() const { return bound_; }
  VecX sample(Eigen::Index n);

 private:
  double bound_;
  std::mt19937_64 rng_;
};

// qddot = M^-1 (tau - J^T F - C qdot - g - friction qdot + d). F_ext is a
// base-frame wrench acting at the end-effector.
VecX forward_dynamics(const TwoLinkModel& model, const JointState& state, const VecX& tau,
                      const Wrench& f_ext, const VecX& disturbance);
VecX forward_dynamics(const TwoLinkModel& model, const JointState& state, const VecX& tau,
                      const Wrench& f_ext, DisturbanceModel& disturbance);

using TorqueFunction = std::function<VecX(const JointState&)>;

// Classical fourth-order Runge-Kutta step of the two-link dynamics under a
// state-dependent torque, no disturbance.
JointState rk4_step(const TwoLinkModel& model, const JointState& state, const TorqueFunction& tau,
                    const Wrench& f_ext, double dt);

struct TorqueLawOptions {
  // Adds g(q) to the torque.
  bool compensate_gravity = false;
  // Cancels the terms lumped into d(t): adds C qdot and subtracts
  // M J^+ Jdot qdot.
  bool compensate_bias = false;
  PinvOptions pinv;
};

// tau = M J^+ (xdd_d - M_d^-1 (B_d (xdot - xdot_d) - (F - F_d))) + J^T F
// on the planar task (vx, vy). All twists and wrenches are base-frame; gain
// diagonals are taken from the first two entries of PolicyParams.
VecX torque_law(const TwoLinkModel& model, const JointState& state, const Vec6& xdd_d,
                const Twist& xdot, const Twist& xdot_d, const Wrench& f, const Wrench& f_d,
                const PolicyParams& gains, const TorqueLawOptions& options = {});

// 6-DOF end-effector plant driven by end-effector frame velocity commands.
// Each twist axis tracks its saturated command through a first-order lag
// (exact exponential discretization); the ideal variant has no lag.
struct VelocityModeConfig {
  enum class Response { kFirstOrderLag, kIdeal };

  Response response = Response::kFirstOrderLag;
  std::array<double, 6> time_constants{0.01, 0.01, 0.01, 0.01, 0.01, 0.01};  // s
  double saturation_linear = 0.5;   // m/s
  double saturation_angular = 1.5;  // rad/s

  void validate() const;
  bool operator==(const VelocityModeConfig&) const = default;
};

class VelocityModePlant {
 public:
  VelocityModePlant(const VelocityModeConfig& config, const Pose& pose,
                    const Twist& twist = Twist::zero(Frame::kEndEffector));

  // Advances by dt: achieved twist first, then the pose from the new twist
  // (position linearly, orientation by the quaternion exponential of the
  // base-frame angular velocity).
  void step(const Twist& command, double dt);

  const VelocityModeConfig& config() const { return config_; }
  const Pose& pose() const { return pose_; }
  // Achieved twist, end-effector frame.
  const Twist& twist() const { return twist_; }

 private:
  VelocityModeConfig config_;
  Pose pose_;
  Twist twist_;
};

VelocityModePlant velocity_mode_step(VelocityModePlant plant, const Twist& command, double dt);

}  // namespace grasp

#endif  // GRASP_PLANT_HPP_
