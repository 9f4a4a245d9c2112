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

#ifndef GRASP_POLICY_HPP_
#define GRASP_POLICY_HPP_

#include <span>
#include <string>
#include <vector>

#include "grasp/kinematics.hpp"

namespace grasp {

// Admittance gains. Matrices are diagonal and stored as their diagonals,
// ordered (x, y, z, rx, ry, rz) in the end-effector frame.
struct PolicyParams {
  Vec6 M_d = Vec6::Ones();
  Vec6 B_d = Vec6::Constant(4.0);
  Vec6 B_f = (Vec6() << 0.5, 0.5, 0.5, 2.0, 2.0, 2.0).finished();
  double alpha = 0.0;
  // Normalizes the tangential force inside the gate's tanh (N).
  double F_scale = 1.0;

  // Human-readable descriptions of every violated invariant; empty if valid.
  std::vector<std::string> violations() const;
  // Throws std::invalid_argument carrying the first violation.
  void validate() const;

  bool operator==(const PolicyParams&) const = default;
};

struct Setpoints {
  Twist v_d = Twist::zero(Frame::kEndEffector);
  Vec6 vdot_d = Vec6::Zero();
  double F_dye = 0.0;  // desired tangential (y) force, N
  double F_dze = 0.0;  // desired approach (z) force, N

  bool operator==(const Setpoints& other) const;
};

// g = 1 - alpha * tanh(|F_ye| / F_scale).
double gate_value(double F_ye, const PolicyParams& params);

// Sensor feedback vector
//   [0, g (F_ye - F_dye), F_ze - F_dze, tau_xe, tau_ye, 0].
// The measured wrench must be expressed in the end-effector frame.
Vec6 feedback_wrench(const Wrench& measured, const Setpoints& sp, const PolicyParams& params);

// End-effector frame acceleration
//   a = vdot_d - M_d^-1 (B_d (v - v_d) + B_f fb),
// so that M_d (vdot - vdot_d) + B_d (v - v_d) + B_f fb = 0 along the closed loop.
Vec6 acceleration_policy(const Twist& state_twist, const Setpoints& sp, const Vec6& fb,
                         const PolicyParams& params);

// Base-frame Cartesian acceleration a = Rbar a_e + d(Rbar)/dt xdot_e that
// makes the end-effector frame acceleration equal a_e.
Vec6 cartesian_accel_command(const Vec6& a_e, const RotationMatrix& r, const Twist& twist_e);

struct ErrorDynamicsSample {
  double t = 0.0;
  Vec6 twist = Vec6::Zero();     // v_e, end-effector frame
  Vec6 feedback = Vec6::Zero();  // fb at the same instant
};

// Max over the window of |M_d (vdot - vdot_d) + B_d (v - v_d) + B_f fb|,
// with vdot from forward differences. Fewer than two samples give 0.
double error_dynamics_residual(std::span<const ErrorDynamicsSample> window, const Setpoints& sp,
                               const PolicyParams& params);

}  // namespace grasp

#endif  // GRASP_POLICY_HPP_
