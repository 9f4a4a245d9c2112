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

#include "grasp/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace grasp {
namespace {

void require_frame(Frame actual, Frame expected, const char* what) {
  if (actual != expected) {
    throw FrameMismatchError(std::string(what) + ": expected " +
                             std::string(to_string(expected)) + " frame, got " +
                             std::string(to_string(actual)));
  }
}

}  // namespace

std::string_view to_string(Frame frame) {
  switch (frame) {
    case Frame::kBase:
      return "base";
    case Frame::kEndEffector:
      return "end-effector";
  }
  return "unknown";
}

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m) {
  if (!m.allFinite()) throw std::invalid_argument("rotation matrix has non-finite entries");
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho > kTolerance || std::abs(det - 1.0) > kTolerance) {
    throw std::invalid_argument("matrix is not a proper rotation (|R^T R - I| = " +
                                std::to_string(ortho) + ", det = " + std::to_string(det) + ")");
  }
}

RotationMatrix RotationMatrix::about_axis(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw std::invalid_argument("rotation axis must be nonzero");
  return RotationMatrix(Eigen::AngleAxisd(angle, axis / n).toRotationMatrix(), Unchecked{});
}

RotationMatrix RotationMatrix::from_quaternion(const Eigen::Quaterniond& q) {
  return RotationMatrix(q.normalized().toRotationMatrix(), Unchecked{});
}

RotationMatrix RotationMatrix::transpose() const {
  return RotationMatrix(m_.transpose(), Unchecked{});
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& other) const {
  return RotationMatrix(m_ * other.m_, Unchecked{});
}

RotationMatrix Pose::rotation() const { return RotationMatrix::from_quaternion(orientation); }

bool Pose::operator==(const Pose& other) const {
  return position == other.position && orientation.coeffs() == other.orientation.coeffs();
}

Twist Twist::from_vector(const Vec6& v, Frame frame) {
  return Twist{v.head<3>(), v.tail<3>(), frame};
}

Vec6 Twist::vector() const {
  Vec6 v;
  v << linear, angular;
  return v;
}

Twist Twist::operator+(const Twist& other) const {
  require_frame(other.frame, frame, "twist addition");
  return Twist{linear + other.linear, angular + other.angular, frame};
}

Twist Twist::operator-(const Twist& other) const {
  require_frame(other.frame, frame, "twist subtraction");
  return Twist{linear - other.linear, angular - other.angular, frame};
}

Twist Twist::operator*(double s) const { return Twist{linear * s, angular * s, frame}; }

Wrench Wrench::from_vector(const Vec6& v, Frame frame) {
  return Wrench{v.head<3>(), v.tail<3>(), frame};
}

Vec6 Wrench::vector() const {
  Vec6 v;
  v << force, moment;
  return v;
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

Mat6 block_rotation(const RotationMatrix& r) {
  Mat6 out = Mat6::Zero();
  out.topLeftCorner<3, 3>() = r.matrix();
  out.bottomRightCorner<3, 3>() = r.matrix();
  return out;
}

Twist twist_to_base(const Twist& t, const RotationMatrix& r) {
  require_frame(t.frame, Frame::kEndEffector, "twist_to_base");
  return Twist{r * t.linear, r * t.angular, Frame::kBase};
}

Twist twist_to_ee(const Twist& t, const RotationMatrix& r) {
  require_frame(t.frame, Frame::kBase, "twist_to_ee");
  const Mat3& m = r.matrix();
  return Twist{m.transpose() * t.linear, m.transpose() * t.angular, Frame::kEndEffector};
}

Wrench wrench_to_base(const Wrench& w, const RotationMatrix& r) {
  require_frame(w.frame, Frame::kEndEffector, "wrench_to_base");
  return Wrench{r * w.force, r * w.moment, Frame::kBase};
}

Wrench wrench_to_ee(const Wrench& w, const RotationMatrix& r) {
  require_frame(w.frame, Frame::kBase, "wrench_to_ee");
  const Mat3& m = r.matrix();
  return Wrench{m.transpose() * w.force, m.transpose() * w.moment, Frame::kEndEffector};
}

MatX jacobian_pinv(const JacobianMatrix& j, const PinvOptions& options) {
  if (j.rows() == 0 || j.rows() > j.cols()) {
    throw std::invalid_argument("jacobian_pinv needs a wide or square matrix, got " +
                                std::to_string(j.rows()) + "x" + std::to_string(j.cols()));
  }
  if (!j.allFinite()) throw NonFiniteError("jacobian has non-finite entries");
  const MatX jjt = j * j.transpose();
  const double smallest = Eigen::SelfAdjointEigenSolver<MatX>(jjt, Eigen::EigenvaluesOnly)
                              .eigenvalues()(0);
  if (!(smallest > options.singularity_threshold)) {
    throw SingularityError("J J^T smallest eigenvalue " + std::to_string(smallest) +
                           " is below threshold " +
                           std::to_string(options.singularity_threshold));
  }
  // (J J^T) Y = J  =>  J^+ = Y^T
  const MatX y = jjt.ldlt().solve(j);
  return y.transpose();
}

MatX null_projector(const JacobianMatrix& j, const PinvOptions& options) {
  const MatX pinv = jacobian_pinv(j, options);
  return MatX::Identity(j.cols(), j.cols()) - pinv * j;
}

Twist joint_to_cartesian_vel(const JacobianMatrix& j, const VecX& qdot) {
  if (j.rows() != 6 || j.cols() != qdot.size()) {
    throw std::invalid_argument("joint_to_cartesian_vel: dimension mismatch");
  }
  const Vec6 v = j * qdot;
  return Twist::from_vector(v, Frame::kBase);
}

VecX joint_accel_decomposition(const JacobianMatrix& j, const JacobianMatrix& jdot,
                               const VecX& qdot, const VecX& xddot, const VecX& qddot_null,
                               const PinvOptions& options) {
  if (jdot.rows() != j.rows() || jdot.cols() != j.cols() || qdot.size() != j.cols() ||
      xddot.size() != j.rows() || qddot_null.size() != j.cols()) {
    throw std::invalid_argument("joint_accel_decomposition: dimension mismatch");
  }
  const MatX pinv = jacobian_pinv(j, options);
  const MatX projector = MatX::Identity(j.cols(), j.cols()) - pinv * j;
  return pinv * (xddot - jdot * qdot) + projector * qddot_null;
}

Eigen::Quaterniond integrate_orientation(const Eigen::Quaterniond& q, const Vec3& omega_base,
                                         double dt) {
  const double angle = omega_base.norm() * dt;
  if (angle == 0.0) return q.normalized();
  const Eigen::Quaterniond step(Eigen::AngleAxisd(angle, omega_base.normalized()));
  return (step * q).normalized();
}

}  // namespace grasp
