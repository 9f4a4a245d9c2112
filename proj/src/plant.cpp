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

#include "grasp/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace grasp {
namespace {

void require_two_link_state(const JointState& state) {
  if (state.q.size() != 2 || state.qdot.size() != 2) {
    throw std::invalid_argument("two-link state must have 2 joints");
  }
  if (!state.q.allFinite() || !state.qdot.allFinite()) {
    throw NonFiniteError("two-link state has non-finite entries");
  }
}

}  // namespace

void TwoLinkModel::validate() const {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("two-link masses must be > 0");
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw std::invalid_argument("two-link lengths must be > 0");
  if (!(gravity >= 0.0)) throw std::invalid_argument("gravity must be >= 0");
  if (!(friction >= 0.0)) throw std::invalid_argument("friction must be >= 0");
}

Mat2 mass_matrix(const TwoLinkModel& m, const Vec2& q) {
  const double c2 = std::cos(q[1]);
  const double off = m.m2 * (m.l2 * m.l2 + m.l1 * m.l2 * c2);
  Mat2 out;
  out << (m.m1 + m.m2) * m.l1 * m.l1 + m.m2 * m.l2 * m.l2 + 2.0 * m.m2 * m.l1 * m.l2 * c2, off,
         off, m.m2 * m.l2 * m.l2;
  return out;
}

Mat2 coriolis_matrix(const TwoLinkModel& m, const Vec2& q, const Vec2& qdot) {
  const double h = -m.m2 * m.l1 * m.l2 * std::sin(q[1]);
  Mat2 out;
  out << h * qdot[1], h * (qdot[0] + qdot[1]),
         -h * qdot[0], 0.0;
  return out;
}

Vec2 coriolis_vector(const TwoLinkModel& m, const Vec2& q, const Vec2& qdot) {
  return coriolis_matrix(m, q, qdot) * qdot;
}

Vec2 gravity_vector(const TwoLinkModel& m, const Vec2& q) {
  const double c1 = std::cos(q[0]);
  const double c12 = std::cos(q[0] + q[1]);
  return Vec2((m.m1 + m.m2) * m.gravity * m.l1 * c1 + m.m2 * m.gravity * m.l2 * c12,
              m.m2 * m.gravity * m.l2 * c12);
}

Vec2 end_effector_position(const TwoLinkModel& m, const Vec2& q) {
  return Vec2(m.l1 * std::cos(q[0]) + m.l2 * std::cos(q[0] + q[1]),
              m.l1 * std::sin(q[0]) + m.l2 * std::sin(q[0] + q[1]));
}

JacobianMatrix two_link_jacobian(const TwoLinkModel& m, const Vec2& q) {
  const double s1 = std::sin(q[0]), c1 = std::cos(q[0]);
  const double s12 = std::sin(q[0] + q[1]), c12 = std::cos(q[0] + q[1]);
  JacobianMatrix j = JacobianMatrix::Zero(6, 2);
  j(0, 0) = -m.l1 * s1 - m.l2 * s12;
  j(0, 1) = -m.l2 * s12;
  j(1, 0) = m.l1 * c1 + m.l2 * c12;
  j(1, 1) = m.l2 * c12;
  j(5, 0) = 1.0;
  j(5, 1) = 1.0;
  return j;
}

JacobianMatrix two_link_jacobian_dot(const TwoLinkModel& m, const Vec2& q, const Vec2& qdot) {
  const double s1 = std::sin(q[0]), c1 = std::cos(q[0]);
  const double s12 = std::sin(q[0] + q[1]), c12 = std::cos(q[0] + q[1]);
  const double w12 = qdot[0] + qdot[1];
  JacobianMatrix jd = JacobianMatrix::Zero(6, 2);
  jd(0, 0) = -m.l1 * c1 * qdot[0] - m.l2 * c12 * w12;
  jd(0, 1) = -m.l2 * c12 * w12;
  jd(1, 0) = -m.l1 * s1 * qdot[0] - m.l2 * s12 * w12;
  jd(1, 1) = -m.l2 * s12 * w12;
  return jd;
}

double kinetic_energy(const TwoLinkModel& model, const JointState& state) {
  require_two_link_state(state);
  const Vec2 qd = state.qdot;
  return 0.5 * qd.dot(mass_matrix(model, state.q) * qd);
}

double potential_energy(const TwoLinkModel& m, const Vec2& q) {
  const double y1 = m.l1 * std::sin(q[0]);
  const double y2 = y1 + m.l2 * std::sin(q[0] + q[1]);
  return m.gravity * (m.m1 * y1 + m.m2 * y2);
}

DisturbanceModel::DisturbanceModel(double bound, std::uint64_t seed) : bound_(bound), rng_(seed) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("disturbance bound must be finite and >= 0");
  }
}

VecX DisturbanceModel::sample(Eigen::Index n) {
  VecX d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // 53-bit uniform in [0, 1), mapped to [-bound, bound).
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    d[i] = bound_ * (2.0 * u - 1.0);
  }
  return d;
}

VecX forward_dynamics(const TwoLinkModel& model, const JointState& state, const VecX& tau,
                      const Wrench& f_ext, const VecX& disturbance) {
  require_two_link_state(state);
  if (tau.size() != 2 || disturbance.size() != 2) {
    throw std::invalid_argument("forward_dynamics: torque and disturbance must have 2 entries");
  }
  if (f_ext.frame != Frame::kBase) {
    throw FrameMismatchError("forward_dynamics: interaction wrench must be in the base frame");
  }
  if (!tau.allFinite() || !disturbance.allFinite() || !f_ext.vector().allFinite()) {
    throw NonFiniteError("forward_dynamics: non-finite input");
  }
  const Vec2 q = state.q;
  const Vec2 qd = state.qdot;
  const Vec2 rhs = tau - two_link_jacobian(model, q).transpose() * f_ext.vector() -
                   coriolis_vector(model, q, qd) - gravity_vector(model, q) - model.friction * qd +
                   disturbance;
  const VecX qdd = mass_matrix(model, q).llt().solve(rhs);
  if (!qdd.allFinite()) throw NonFiniteError("forward_dynamics: non-finite acceleration");
  return qdd;
}

VecX forward_dynamics(const TwoLinkModel& model, const JointState& state, const VecX& tau,
                      const Wrench& f_ext, DisturbanceModel& disturbance) {
  return forward_dynamics(model, state, tau, f_ext, disturbance.sample(2));
}

JointState rk4_step(const TwoLinkModel& model, const JointState& state, const TorqueFunction& tau,
                    const Wrench& f_ext, double dt) {
  const VecX none = VecX::Zero(2);
  auto deriv = [&](const JointState& s) {
    return std::pair<VecX, VecX>{s.qdot, forward_dynamics(model, s, tau(s), f_ext, none)};
  };
  auto shifted = [](const JointState& s, const std::pair<VecX, VecX>& k, double h) {
    return JointState{s.q + h * k.first, s.qdot + h * k.second};
  };
  const auto k1 = deriv(state);
  const auto k2 = deriv(shifted(state, k1, 0.5 * dt));
  const auto k3 = deriv(shifted(state, k2, 0.5 * dt));
  const auto k4 = deriv(shifted(state, k3, dt));
  return JointState{
      state.q + dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first),
      state.qdot + dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second)};
}

VecX torque_law(const TwoLinkModel& model, const JointState& state, const Vec6& xdd_d,
                const Twist& xdot, const Twist& xdot_d, const Wrench& f, const Wrench& f_d,
                const PolicyParams& gains, const TorqueLawOptions& options) {
  require_two_link_state(state);
  if (xdot.frame != Frame::kBase || xdot_d.frame != Frame::kBase || f.frame != Frame::kBase ||
      f_d.frame != Frame::kBase) {
    throw FrameMismatchError("torque_law: twists and wrenches must be in the base frame");
  }
  const Vec2 q = state.q;
  const Vec2 qd = state.qdot;
  const JacobianMatrix j = two_link_jacobian(model, q);
  const JacobianMatrix j_task = j.topRows(2);

  const Vec6 vel_err = (xdot - xdot_d).vector();
  const Vec6 force_err = f.vector() - f_d.vector();
  Vec2 task_accel;
  for (int i = 0; i < 2; ++i) {
    task_accel[i] = xdd_d[i] - (gains.B_d[i] * vel_err[i] - force_err[i]) / gains.M_d[i];
  }
  if (options.compensate_bias) {
    task_accel -= two_link_jacobian_dot(model, q, qd).topRows(2) * qd;
  }

  const Mat2 mass = mass_matrix(model, q);
  VecX tau = mass * (jacobian_pinv(j_task, options.pinv) * task_accel) + j.transpose() * f.vector();
  if (options.compensate_gravity) tau += gravity_vector(model, q);
  if (options.compensate_bias) tau += coriolis_vector(model, q, qd);
  return tau;
}

void VelocityModeConfig::validate() const {
  if (response == Response::kFirstOrderLag) {
    for (double tc : time_constants) {
      if (!(tc > 0.0) || !std::isfinite(tc)) {
        throw std::invalid_argument("velocity-mode time constants must be > 0");
      }
    }
  }
  if (!(saturation_linear > 0.0) || !(saturation_angular > 0.0)) {
    throw std::invalid_argument("velocity-mode saturation limits must be > 0");
  }
}

VelocityModePlant::VelocityModePlant(const VelocityModeConfig& config, const Pose& pose,
                                     const Twist& twist)
    : config_(config), pose_(pose), twist_(twist) {
  config_.validate();
  if (twist.frame != Frame::kEndEffector) {
    throw FrameMismatchError("velocity-mode plant twist must be in the end-effector frame");
  }
  pose_.orientation.normalize();
}

void VelocityModePlant::step(const Twist& command, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("velocity_mode_step: dt must be > 0");
  if (command.frame != Frame::kEndEffector) {
    throw FrameMismatchError("velocity_mode_step: command must be in the end-effector frame");
  }
  const Vec6 cmd = command.vector();
  if (!cmd.allFinite()) throw NonFiniteError("velocity_mode_step: non-finite command");

  Vec6 v = twist_.vector();
  for (int i = 0; i < 6; ++i) {
    const double limit = i < 3 ? config_.saturation_linear : config_.saturation_angular;
    const double target = std::clamp(cmd[i], -limit, limit);
    if (config_.response == VelocityModeConfig::Response::kIdeal) {
      v[i] = target;
    } else {
      v[i] += -std::expm1(-dt / config_.time_constants[i]) * (target - v[i]);
    }
  }
  twist_ = Twist::from_vector(v, Frame::kEndEffector);

  const RotationMatrix r = pose_.rotation();
  pose_.position += (r * twist_.linear) * dt;
  pose_.orientation = integrate_orientation(pose_.orientation, r * twist_.angular, dt);
}

VelocityModePlant velocity_mode_step(VelocityModePlant plant, const Twist& command, double dt) {
  plant.step(command, dt);
  return plant;
}

}  // namespace grasp
