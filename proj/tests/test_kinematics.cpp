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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grasp/errors.hpp"
#include "grasp/kinematics.hpp"
#include "test_support.hpp"

using namespace grasp;
using test::random_matrix;
using test::random_rotation;

namespace {

const RotationMatrix kQuarterZ = RotationMatrix::about_axis(Vec3::UnitZ(), std::numbers::pi / 2.0);

// Naive right inverse through an explicit inverse of J J^T.
MatX naive_pinv(const MatX& j) { return j.transpose() * (j * j.transpose()).inverse(); }

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("rotation matrix rejects non-orthonormal input") {
  Mat3 m = Mat3::Identity();
  m(0, 1) = 1e-6;
  CHECK_THROWS_AS(RotationMatrix{m}, std::invalid_argument);
  CHECK_THROWS_AS(RotationMatrix{Mat3(-Mat3::Identity())}, std::invalid_argument);
  CHECK_NOTHROW(RotationMatrix{Mat3::Identity()});
}

TEST_CASE("block rotation") {
  CHECK(block_rotation(RotationMatrix()).isApprox(Mat6::Identity(), 0.0));
  Vec6 e1 = Vec6::Zero();
  e1[0] = 1.0;
  Vec6 e2 = Vec6::Zero();
  e2[1] = 1.0;
  CHECK((block_rotation(kQuarterZ) * e1 - e2).norm() < 1e-15);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Mat6 b = block_rotation(random_rotation(rng));
    CHECK((b.transpose() * b - Mat6::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("twist frame changes") {
  const Twist t{Vec3(1.0, 0.0, 0.0), Vec3(0.0, 0.0, 2.0), Frame::kEndEffector};
  const Twist same = twist_to_base(t, RotationMatrix());
  CHECK(same.vector() == t.vector());
  CHECK(same.frame == Frame::kBase);

  const Twist b = twist_to_base(t, kQuarterZ);
  CHECK((b.linear - Vec3(0.0, 1.0, 0.0)).norm() < 1e-15);
  CHECK((b.angular - Vec3(0.0, 0.0, 2.0)).norm() < 1e-15);

  const Twist back = twist_to_ee(Twist{Vec3(0.0, 1.0, 0.0), Vec3::Zero(), Frame::kBase}, kQuarterZ);
  CHECK((back.linear - Vec3(1.0, 0.0, 0.0)).norm() < 1e-15);
  CHECK(back.frame == Frame::kEndEffector);

  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const RotationMatrix r = random_rotation(rng);
    const Twist x = Twist::from_vector(test::random_vec6(rng), Frame::kEndEffector);
    CHECK((twist_to_ee(twist_to_base(x, r), r).vector() - x.vector()).norm() < 1e-12);
    const Twist y = Twist::from_vector(test::random_vec6(rng), Frame::kBase);
    CHECK((twist_to_base(twist_to_ee(y, r), r).vector() - y.vector()).norm() < 1e-12);
  }
}

TEST_CASE("frame tags are enforced") {
  const Twist ee = Twist::zero(Frame::kEndEffector);
  const Twist base = Twist::zero(Frame::kBase);
  CHECK_THROWS_AS(twist_to_base(base, RotationMatrix()), FrameMismatchError);
  CHECK_THROWS_AS(twist_to_ee(ee, RotationMatrix()), FrameMismatchError);
  CHECK_THROWS_AS(ee + base, FrameMismatchError);
  CHECK_THROWS_AS(ee - base, FrameMismatchError);
  CHECK_THROWS_AS(wrench_to_base(Wrench::zero(Frame::kBase), RotationMatrix()), FrameMismatchError);
  CHECK_NOTHROW(ee + ee);
}

TEST_CASE("wrench frame changes round trip") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const RotationMatrix r = random_rotation(rng);
    const Wrench w = Wrench::from_vector(test::random_vec6(rng, 10.0), Frame::kEndEffector);
    CHECK((wrench_to_ee(wrench_to_base(w, r), r).vector() - w.vector()).norm() < 1e-12);
  }
}

TEST_CASE("pseudoinverse closed forms") {
  MatX j(2, 3);
  j << 1, 0, 0, 0, 1, 0;
  MatX expect(3, 2);
  expect << 1, 0, 0, 1, 0, 0;
  CHECK((jacobian_pinv(j) - expect).norm() < 1e-15);

  MatX row(1, 2);
  row << 1, 1;
  const MatX p = jacobian_pinv(row);
  CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    MatX sq = random_matrix(rng, 4, 4) + 4.0 * MatX::Identity(4, 4);
    CHECK((jacobian_pinv(sq) - sq.inverse()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pseudoinverse matches naive oracle and Moore-Penrose conditions") {
  std::mt19937_64 rng(15);
  for (int rows = 1; rows <= 6; ++rows) {
    for (int cols = rows; cols <= 9; ++cols) {
      const MatX j = random_matrix(rng, rows, cols);
      const MatX p = jacobian_pinv(j);
      CHECK((p - naive_pinv(j)).norm() < 1e-8 * (1.0 + naive_pinv(j).norm()));
      CHECK((j * p - MatX::Identity(rows, rows)).cwiseAbs().rowwise().sum().maxCoeff() < 1e-9);
      CHECK((p * j * p - p).norm() < 1e-9);
      CHECK(((p * j).transpose() - p * j).norm() < 1e-9);
    }
  }
}

TEST_CASE("pseudoinverse singularity") {
  MatX j(2, 3);
  j << 1, 2, 3, 2, 4, 6;
  CHECK_THROWS_AS(jacobian_pinv(j), SingularityError);
  MatX tiny(1, 2);
  tiny << 1e-5, 0.0;
  CHECK_THROWS_AS(jacobian_pinv(tiny), SingularityError);
  CHECK_NOTHROW(jacobian_pinv(tiny, PinvOptions{1e-12}));
  MatX tall(3, 2);
  tall.setOnes();
  CHECK_THROWS(jacobian_pinv(tall));
}

TEST_CASE("null projector") {
  MatX j(2, 3);
  j << 1, 0, 0, 0, 1, 0;
  Eigen::Matrix3d expect = Eigen::Matrix3d::Zero();
  expect(2, 2) = 1.0;
  CHECK((null_projector(j) - expect).norm() < 1e-15);

  std::mt19937_64 rng(16);
  const MatX sq = random_matrix(rng, 3, 3) + 3.0 * MatX::Identity(3, 3);
  CHECK(null_projector(sq).cwiseAbs().maxCoeff() < 1e-12);

  for (int i = 0; i < 100; ++i) {
    const int rows = 1 + i % 6;
    const MatX wide = random_matrix(rng, rows, rows + 3);
    const VecX v = random_matrix(rng, rows + 3, 1);
    CHECK((wide * (null_projector(wide) * v)).norm() < 1e-9 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("joint to cartesian velocity") {
  std::mt19937_64 rng(17);
  const MatX j = random_matrix(rng, 6, 7);
  CHECK(joint_to_cartesian_vel(j, VecX::Zero(7)).vector().norm() == 0.0);
  const Twist stacked = joint_to_cartesian_vel(MatX::Identity(6, 6), VecX::Ones(6));
  CHECK(stacked.vector() == Vec6::Ones());
  CHECK(stacked.frame == Frame::kBase);

  const VecX qd = random_matrix(rng, 7, 1);
  const Vec6 got = joint_to_cartesian_vel(j, qd).vector();
  for (int r = 0; r < 6; ++r) {
    double dot = 0.0;
    for (int c = 0; c < 7; ++c) dot += j(r, c) * qd[c];
    CHECK(std::abs(got[r] - dot) < 1e-12);
  }
  CHECK_THROWS(joint_to_cartesian_vel(random_matrix(rng, 5, 7), qd));
  CHECK_THROWS(joint_to_cartesian_vel(j, VecX::Zero(6)));
}

TEST_CASE("joint acceleration decomposition") {
  std::mt19937_64 rng(18);
  const MatX j = random_matrix(rng, 4, 6);
  const MatX jdot = random_matrix(rng, 4, 6);
  const VecX qd = random_matrix(rng, 6, 1);
  const VecX cancel = jdot * qd;
  CHECK(joint_accel_decomposition(j, jdot, qd, cancel, VecX::Zero(6)).norm() < 1e-14);

  const MatX sq = random_matrix(rng, 3, 3) + 3.0 * MatX::Identity(3, 3);
  const VecX x3 = random_matrix(rng, 3, 1);
  CHECK((joint_accel_decomposition(sq, MatX::Zero(3, 3), VecX::Zero(3), x3, VecX::Zero(3)) -
         sq.inverse() * x3)
            .norm() < 1e-10);

  for (int i = 0; i < 100; ++i) {
    const VecX xdd = random_matrix(rng, 4, 1);
    const VecX null_acc = random_matrix(rng, 6, 1);
    const VecX qdd = joint_accel_decomposition(j, jdot, qd, xdd, null_acc);
    CHECK((j * qdd + jdot * qd - xdd).norm() < 1e-9);
  }
}

TEST_CASE("orientation integration is the quaternion exponential") {
  const double w = 0.7;
  const int steps = 1000;
  const double dt = std::numbers::pi / w / steps;
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  for (int i = 0; i < steps; ++i) q = integrate_orientation(q, Vec3(0.0, 0.0, w), dt);
  const Mat3 expect = RotationMatrix::about_axis(Vec3::UnitZ(), std::numbers::pi).matrix();
  CHECK((q.toRotationMatrix() - expect).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(q.norm() - 1.0) < 1e-15);
  CHECK(integrate_orientation(q, Vec3::Zero(), 0.1).coeffs() == q.coeffs());
}

TEST_CASE("skew matrix") {
  const Vec3 a(0.3, -1.2, 2.0), b(-0.5, 0.1, 0.7);
  CHECK((skew(a) * b - a.cross(b)).norm() < 1e-15);
  CHECK((skew(a) + skew(a).transpose()).norm() == 0.0);
}

}  // TEST_SUITE
