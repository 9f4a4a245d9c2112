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

#ifndef GRASP_KINEMATICS_HPP_
#define GRASP_KINEMATICS_HPP_

#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "grasp/errors.hpp"

namespace grasp {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

enum class Frame { kBase, kEndEffector };

std::string_view to_string(Frame frame);

// Orthonormal 3x3 matrix with determinant +1. Maps end-effector coordinates
// into base coordinates when it describes the end-effector orientation.
class RotationMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  RotationMatrix() : m_(Mat3::Identity()) {}
  // Throws std::invalid_argument unless m is a proper rotation.
  explicit RotationMatrix(const Mat3& m);

  static RotationMatrix about_axis(const Vec3& axis, double angle);
  static RotationMatrix from_quaternion(const Eigen::Quaterniond& q);

  const Mat3& matrix() const { return m_; }
  RotationMatrix transpose() const;
  Vec3 column(int i) const { return m_.col(i); }

  RotationMatrix operator*(const RotationMatrix& other) const;
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  struct Unchecked {};
  RotationMatrix(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

// Position plus unit-quaternion orientation of the end-effector in the base
// frame. The approach axis z_e is the third column of the rotation.
struct Pose {
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  RotationMatrix rotation() const;
  Vec3 approach_axis() const { return rotation().column(2); }

  bool operator==(const Pose& other) const;
};

struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();
  Frame frame = Frame::kBase;

  static Twist from_vector(const Vec6& v, Frame frame);
  static Twist zero(Frame frame) { return Twist{Vec3::Zero(), Vec3::Zero(), frame}; }
  Vec6 vector() const;

  Twist operator+(const Twist& other) const;
  Twist operator-(const Twist& other) const;
  Twist operator*(double s) const;
};

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  Frame frame = Frame::kBase;

  static Wrench from_vector(const Vec6& v, Frame frame);
  static Wrench zero(Frame frame) { return Wrench{Vec3::Zero(), Vec3::Zero(), frame}; }
  Vec6 vector() const;
};

// 6xn (or, for reduced task spaces, mxn with m <= n) Jacobian.
using JacobianMatrix = MatX;

struct PinvOptions {
  // Smallest admissible eigenvalue of J*J^T.
  double singularity_threshold = 1e-8;
};

Mat3 skew(const Vec3& v);

// [R 0; 0 R].
Mat6 block_rotation(const RotationMatrix& r);

// r is the base <- end-effector orientation.
Twist twist_to_base(const Twist& t, const RotationMatrix& r);
Twist twist_to_ee(const Twist& t, const RotationMatrix& r);
Wrench wrench_to_base(const Wrench& w, const RotationMatrix& r);
Wrench wrench_to_ee(const Wrench& w, const RotationMatrix& r);

// Right pseudoinverse J^T (J J^T)^-1, computed by a symmetric solve.
// Throws SingularityError when the smallest eigenvalue of J J^T is at or
// below the threshold.
MatX jacobian_pinv(const JacobianMatrix& j, const PinvOptions& options = {});

// I - J^+ J.
MatX null_projector(const JacobianMatrix& j, const PinvOptions& options = {});

// J qdot for a 6-row Jacobian, returned as a base-frame twist.
Twist joint_to_cartesian_vel(const JacobianMatrix& j, const VecX& qdot);

// Joint acceleration J^+ (xddot - Jdot qdot) + (I - J^+ J) qddot_null.
VecX joint_accel_decomposition(const JacobianMatrix& j, const JacobianMatrix& jdot,
                               const VecX& qdot, const VecX& xddot, const VecX& qddot_null,
                               const PinvOptions& options = {});

// Left-multiplies the orientation by exp(omega_base * dt) and renormalizes.
Eigen::Quaterniond integrate_orientation(const Eigen::Quaterniond& q, const Vec3& omega_base,
                                         double dt);

}  // namespace grasp

#endif  // GRASP_KINEMATICS_HPP_
