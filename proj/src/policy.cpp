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

#include "grasp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace grasp {
namespace {

const char* const kAxis[6] = {"x", "y", "z", "rx", "ry", "rz"};

}  // namespace

std::vector<std::string> PolicyParams::violations() const {
  std::vector<std::string> out;
  auto add = [&out](const std::string& what, double value) {
    std::ostringstream os;
    os << what << " (got " << value << ")";
    out.push_back(os.str());
  };
  for (int i = 0; i < 6; ++i) {
    if (!(M_d[i] > 0.0) || !std::isfinite(M_d[i])) add(std::string("M_d[") + kAxis[i] + "] must be > 0", M_d[i]);
    if (!(B_d[i] > 0.0) || !std::isfinite(B_d[i])) add(std::string("B_d[") + kAxis[i] + "] must be > 0", B_d[i]);
    if (!(B_f[i] >= 0.0) || !std::isfinite(B_f[i])) add(std::string("B_f[") + kAxis[i] + "] must be >= 0", B_f[i]);
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) add("alpha must lie in [0, 1]", alpha);
  if (!(F_scale > 0.0) || !std::isfinite(F_scale)) add("F_scale must be > 0", F_scale);
  return out;
}

void PolicyParams::validate() const {
  const auto v = violations();
  if (!v.empty()) throw std::invalid_argument("policy: " + v.front());
}

bool Setpoints::operator==(const Setpoints& other) const {
  return v_d.frame == other.v_d.frame && v_d.vector() == other.v_d.vector() &&
         vdot_d == other.vdot_d && F_dye == other.F_dye && F_dze == other.F_dze;
}

double gate_value(double F_ye, const PolicyParams& params) {
  return 1.0 - params.alpha * std::tanh(std::abs(F_ye) / params.F_scale);
}

Vec6 feedback_wrench(const Wrench& measured, const Setpoints& sp, const PolicyParams& params) {
  if (measured.frame != Frame::kEndEffector) {
    throw FrameMismatchError("feedback_wrench: measured wrench must be in the end-effector frame");
  }
  const double f_ye = measured.force.y();
  Vec6 fb;
  fb << 0.0,
        gate_value(f_ye, params) * (f_ye - sp.F_dye),
        measured.force.z() - sp.F_dze,
        measured.moment.x(),
        measured.moment.y(),
        0.0;
  return fb;
}

Vec6 acceleration_policy(const Twist& state_twist, const Setpoints& sp, const Vec6& fb,
                         const PolicyParams& params) {
  const Vec6 error = (state_twist - sp.v_d).vector();
  const Vec6 drive =
      params.M_d.cwiseProduct(sp.vdot_d) - params.B_d.cwiseProduct(error) - params.B_f.cwiseProduct(fb);
  return drive.cwiseQuotient(params.M_d);
}

Vec6 cartesian_accel_command(const Vec6& a_e, const RotationMatrix& r, const Twist& twist_e) {
  if (twist_e.frame != Frame::kEndEffector) {
    throw FrameMismatchError("cartesian_accel_command: twist must be in the end-effector frame");
  }
  const Vec3 omega_base = r * twist_e.angular;
  Mat6 rbar_dot = Mat6::Zero();
  const Mat3 rdot = skew(omega_base) * r.matrix();
  rbar_dot.topLeftCorner<3, 3>() = rdot;
  rbar_dot.bottomRightCorner<3, 3>() = rdot;
  return block_rotation(r) * a_e + rbar_dot * twist_e.vector();
}

double error_dynamics_residual(std::span<const ErrorDynamicsSample> window, const Setpoints& sp,
                               const PolicyParams& params) {
  double worst = 0.0;
  const Vec6 v_d = sp.v_d.vector();
  for (std::size_t k = 0; k + 1 < window.size(); ++k) {
    const auto& s = window[k];
    const double h = window[k + 1].t - s.t;
    if (!(h > 0.0)) throw std::invalid_argument("error_dynamics_residual: time must increase");
    const Vec6 vdot = (window[k + 1].twist - s.twist) / h;
    const Vec6 r = params.M_d.cwiseProduct(vdot - sp.vdot_d) + params.B_d.cwiseProduct(s.twist - v_d) +
                   params.B_f.cwiseProduct(s.feedback);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

}  // namespace grasp
