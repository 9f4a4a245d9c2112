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

#ifndef GRASP_CONTACT_HPP_
#define GRASP_CONTACT_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>

#include "grasp/kinematics.hpp"

namespace grasp {

// Half-space bounded by the plane through `point`; the object lies on the
// side opposite `normal`.
struct PlaneSurface {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  bool operator==(const PlaneSurface&) const = default;
};

struct SphereSurface {
  Vec3 center = Vec3::Zero();
  double radius = 0.1;
  bool operator==(const SphereSurface&) const = default;
};

// Infinite circular cylinder around the line through `point` along `axis`.
struct CylinderSurface {
  Vec3 point = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  double radius = 0.05;
  bool operator==(const CylinderSurface&) const = default;
};

// Axis-aligned superellipsoid
//   h(X) = ((|x/a|^p + |y/b|^p)^(q/p) + |z/c|^q)^(1/q),  phi = min(a,b,c) (h - 1)
// with exponents = (p, q): p shapes the horizontal cross-section, q the
// vertical profile. p = q = 2 is an ellipsoid.
struct SuperellipsoidSurface {
  Vec3 center = Vec3::Zero();
  Vec3 semi_axes = Vec3::Constant(0.1);
  Eigen::Vector2d exponents = Eigen::Vector2d::Constant(2.0);
  bool operator==(const SuperellipsoidSurface&) const = default;
};

enum class SurfaceKind { kPlane, kSphere, kCylinder, kSuperellipsoid };

std::string_view to_string(SurfaceKind kind);

// Implicit object geometry phi(X) = 0 plus contact stiffness.
struct SurfaceModel {
  using Shape = std::variant<PlaneSurface, SphereSurface, CylinderSurface, SuperellipsoidSurface>;

  Shape shape = PlaneSurface{};
  double stiffness = 5000.0;  // N/m

  static SurfaceModel plane(const Vec3& point, const Vec3& normal, double stiffness);
  static SurfaceModel sphere(const Vec3& center, double radius, double stiffness);
  static SurfaceModel cylinder(const Vec3& point, const Vec3& axis, double radius,
                               double stiffness);
  static SurfaceModel superellipsoid(const Vec3& center, const Vec3& semi_axes,
                                     const Eigen::Vector2d& exponents, double stiffness);

  SurfaceKind kind() const;
  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const SurfaceModel&) const = default;
};

struct ContactState {
  bool in_contact = false;
  double penetration = 0.0;             // m
  Vec3 contact_point = Vec3::Zero();    // X0, on the undeformed surface
  Vec3 normal = Vec3::UnitZ();          // outward unit normal at X0
};

struct WristGeometry {
  double radius = 0.04;  // m
  bool operator==(const WristGeometry&) const = default;
};

// Signed implicit value: negative inside, zero on the surface, positive
// outside. Exact distance for plane, sphere and cylinder.
double implicit_value(const SurfaceModel& s, const Vec3& x);

// Outward unit gradient of the implicit function. Throws SingularityError
// where the raw gradient norm is below 1e-9.
Vec3 surface_gradient(const SurfaceModel& s, const Vec3& x);

// Nearest point on the undeformed surface. Closed form except for the
// superellipsoid, which iterates and throws ConvergenceError after 100 steps.
Vec3 project_to_surface(const SurfaceModel& s, const Vec3& x);

struct ContactForce {
  ContactState state;
  double force = 0.0;  // N, K * penetration
};

// One-sided penalty spring: nonzero only when phi(X) < 0.
ContactForce contact_force(const SurfaceModel& s, const Vec3& x);

// r F (z_e x n). z_e and n must be unit vectors in the same frame.
Vec3 contact_moment(const WristGeometry& wrist, const Vec3& z_e, const Vec3& normal, double force);

Wrench assemble_wrench(const Vec3& force, const Vec3& moment, Frame frame);

// Angle between the approach axis and the inward normal -n, in [0, pi].
double alignment_angle(const Vec3& z_e, const Vec3& normal);

// n(X) . v
double tangency_residual(const SurfaceModel& s, const Vec3& x, const Vec3& v);

struct SensorConfig {
  double cutoff_hz = 5.0;
  double force_noise_std = 0.05;     // N
  double moment_noise_std = 0.002;   // N*m
  void validate() const;
  bool operator==(const SensorConfig&) const = default;
};

// Force/torque sensor: per-channel Gaussian noise followed by a first-order
// low-pass y += dt / (dt + 1 / (2 pi f_c)) (u - y).
class SensorModel {
 public:
  explicit SensorModel(const SensorConfig& config = {}, std::uint64_t seed = 0,
                       const Vec6& initial_state = Vec6::Zero());

  Wrench read(const Wrench& true_wrench, double dt);

  const SensorConfig& config() const { return config_; }
  const Vec6& filter_state() const { return state_; }

 private:
  SensorConfig config_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  Vec6 state_;
};

inline Wrench sensor_read(SensorModel& sensor, const Wrench& true_wrench, double dt) {
  return sensor.read(true_wrench, dt);
}

}  // namespace grasp

#endif  // GRASP_CONTACT_HPP_
