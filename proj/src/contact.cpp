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

#include "grasp/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grasp {
namespace {

constexpr double kGradientFloor = 1e-9;
constexpr int kMaxProjectionIterations = 100;
// Accepted tangential residual, relative to max(distance, shape size), when
// the projection stalls.
constexpr double kStalledResidual = 2e-6;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Homogeneous (degree one) superellipsoid gauge h, relative to the center.
double gauge(const SuperellipsoidSurface& s, const Vec3& d) {
  const double p = s.exponents[0], q = s.exponents[1];
  const double t = std::pow(std::abs(d.x() / s.semi_axes.x()), p) +
                   std::pow(std::abs(d.y() / s.semi_axes.y()), p);
  const double sum = std::pow(t, q / p) + std::pow(std::abs(d.z() / s.semi_axes.z()), q);
  return std::pow(sum, 1.0 / q);
}

Vec3 gauge_gradient(const SuperellipsoidSurface& s, const Vec3& d) {
  const double p = s.exponents[0], q = s.exponents[1];
  const Vec3& ax = s.semi_axes;
  const double ux = std::abs(d.x() / ax.x()), uy = std::abs(d.y() / ax.y());
  const double uz = std::abs(d.z() / ax.z());
  const double t = std::pow(ux, p) + std::pow(uy, p);
  const double sum = std::pow(t, q / p) + std::pow(uz, q);
  if (sum == 0.0) return Vec3::Zero();
  const double outer = std::pow(sum, 1.0 / q - 1.0);
  Vec3 g = Vec3::Zero();
  if (t > 0.0) {
    const double mid = std::pow(t, q / p - 1.0);
    g.x() = outer * mid * std::pow(ux, p - 1.0) * sign(d.x()) / ax.x();
    g.y() = outer * mid * std::pow(uy, p - 1.0) * sign(d.y()) / ax.y();
  }
  g.z() = outer * std::pow(uz, q - 1.0) * sign(d.z()) / ax.z();
  return g;
}

double char_length(const SuperellipsoidSurface& s) { return s.semi_axes.minCoeff(); }

Vec3 raw_gradient(const SurfaceModel& surface, const Vec3& x) {
  return std::visit(
      Overloaded{
          [&](const PlaneSurface& s) -> Vec3 { return s.normal; },
          [&](const SphereSurface& s) -> Vec3 {
            const Vec3 d = x - s.center;
            const double n = d.norm();
            return n > 0.0 ? Vec3(d / n) : Vec3::Zero();
          },
          [&](const CylinderSurface& s) -> Vec3 {
            const Vec3 d = x - s.point;
            const Vec3 radial = d - d.dot(s.axis) * s.axis;
            const double n = radial.norm();
            return n > 0.0 ? Vec3(radial / n) : Vec3::Zero();
          },
          [&](const SuperellipsoidSurface& s) -> Vec3 {
            return char_length(s) * gauge_gradient(s, x - s.center);
          },
      },
      surface.shape);
}

void require_unit(const Vec3& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
  }
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(what + " must be > 0 (got " + std::to_string(v) + ")");
  }
}

Vec3 normalized_or_throw(const Vec3& v, const char* what) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument(std::string(what) + " must be nonzero");
  return v / n;
}

// Moves x onto the surface along the gradient (Newton on phi).
Vec3 newton_retract(const SurfaceModel& s, Vec3 x) {
  for (int i = 0; i < 50; ++i) {
    const double phi = implicit_value(s, x);
    if (std::abs(phi) < 1e-14) break;
    const Vec3 g = raw_gradient(s, x);
    const double gg = g.squaredNorm();
    if (gg < kGradientFloor * kGradientFloor) {
      throw SingularityError("surface projection hit a gradient singularity");
    }
    x -= (phi / gg) * g;
  }
  return x;
}

// Hessian of the implicit function by central differences of its analytic
// gradient; only used to shape Newton steps.
Mat3 gradient_jacobian(const SurfaceModel& surface, const Vec3& y, double h) {
  Mat3 out;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e[k] = h;
    out.col(k) = (raw_gradient(surface, y + e) - raw_gradient(surface, y - e)) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

// Closest point: Newton on the stationarity conditions
//   y - x + lambda grad(y) = 0,  phi(y) = 0,
// retracting every iterate onto the surface. A damped tangent step takes
// over whenever the Newton step fails to reduce the distance.
Vec3 project_superellipsoid(const SurfaceModel& surface, const SuperellipsoidSurface& s,
                            const Vec3& x) {
  const Vec3 d = x - s.center;
  const double h = gauge(s, d);
  if (!(h > 0.0)) throw SingularityError("cannot project the superellipsoid center");
  // Radial retraction lands exactly on the surface by homogeneity of h.
  Vec3 y = s.center + d / h;
  double dist = (x - y).norm();
  const double fd_step = 1e-5 * char_length(s);
  int stalled = 0;
  // Iterate with the smallest tangential residual relative to its scale.
  Vec3 best = y;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxProjectionIterations; ++it) {
    const Vec3 g = raw_gradient(surface, y);
    const double gn = g.norm();
    if (!(gn >= kGradientFloor)) throw SingularityError("surface projection hit a gradient singularity");
    const Vec3 n = g / gn;
    const Vec3 diff = x - y;
    const Vec3 tangential = diff - diff.dot(n) * n;
    const double tn = tangential.norm();
    // Roundoff floor scales with the larger of the distance and the shape.
    const double scale = std::max(diff.norm(), char_length(s));
    if (tn <= 1e-11 * scale) return newton_retract(surface, y);
    if (tn / scale < best_ratio) {
      best_ratio = tn / scale;
      best = y;
    }
    // Near sharp rims and their focal points the distance is nearly flat
    // and the last digits wander; settle for the best iterate once the
    // distance stalls.
    if (stalled >= 3 && best_ratio <= kStalledResidual) return newton_retract(surface, best);
    const double previous = dist;

    bool moved = false;
    const double lambda = diff.dot(g) / (gn * gn);
    Eigen::Matrix4d kkt;
    kkt.topLeftCorner<3, 3>() = Mat3::Identity() + lambda * gradient_jacobian(surface, y, fd_step);
    kkt.topRightCorner<3, 1>() = g;
    kkt.bottomLeftCorner<1, 3>() = g.transpose();
    kkt(3, 3) = 0.0;
    Eigen::Vector4d rhs;
    rhs << diff - lambda * g, -implicit_value(surface, y);
    const Eigen::Vector4d delta = kkt.fullPivLu().solve(rhs);
    if (delta.allFinite()) {
      const Vec3 candidate = newton_retract(surface, y + delta.head<3>());
      const double cand_dist = (x - candidate).norm();
      if (candidate.allFinite() && cand_dist <= dist) {
        y = candidate;
        dist = cand_dist;
        moved = true;
      }
    }
    double step = 1.0;
    for (int halving = 0; !moved && halving < 40; ++halving, step *= 0.5) {
      const Vec3 candidate = newton_retract(surface, y + step * tangential);
      const double cand_dist = (x - candidate).norm();
      if (cand_dist <= dist) {
        y = candidate;
        dist = cand_dist;
        moved = true;
      }
    }
    if (!moved) break;
    stalled = dist >= previous * (1.0 - 1e-14) ? stalled + 1 : 0;
  }
  if (best_ratio <= kStalledResidual) return newton_retract(surface, best);
  throw ConvergenceError("superellipsoid projection did not converge in " +
                         std::to_string(kMaxProjectionIterations) + " iterations");
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::kPlane:
      return "plane";
    case SurfaceKind::kSphere:
      return "sphere";
    case SurfaceKind::kCylinder:
      return "cylinder";
    case SurfaceKind::kSuperellipsoid:
      return "superellipsoid";
  }
  return "unknown";
}

SurfaceModel SurfaceModel::plane(const Vec3& point, const Vec3& normal, double stiffness) {
  SurfaceModel s{PlaneSurface{point, normalized_or_throw(normal, "plane normal")}, stiffness};
  s.validate();
  return s;
}

SurfaceModel SurfaceModel::sphere(const Vec3& center, double radius, double stiffness) {
  SurfaceModel s{SphereSurface{center, radius}, stiffness};
  s.validate();
  return s;
}

SurfaceModel SurfaceModel::cylinder(const Vec3& point, const Vec3& axis, double radius,
                                    double stiffness) {
  SurfaceModel s{CylinderSurface{point, normalized_or_throw(axis, "cylinder axis"), radius},
                 stiffness};
  s.validate();
  return s;
}

SurfaceModel SurfaceModel::superellipsoid(const Vec3& center, const Vec3& semi_axes,
                                          const Eigen::Vector2d& exponents, double stiffness) {
  SurfaceModel s{SuperellipsoidSurface{center, semi_axes, exponents}, stiffness};
  s.validate();
  return s;
}

SurfaceKind SurfaceModel::kind() const { return static_cast<SurfaceKind>(shape.index()); }

void SurfaceModel::validate() const {
  require_positive(stiffness, "stiffness");
  std::visit(Overloaded{
                 [](const PlaneSurface& s) { require_unit(s.normal, "normal"); },
                 [](const SphereSurface& s) { require_positive(s.radius, "radius"); },
                 [](const CylinderSurface& s) {
                   require_unit(s.axis, "axis");
                   require_positive(s.radius, "radius");
                 },
                 [](const SuperellipsoidSurface& s) {
                   for (int i = 0; i < 3; ++i) require_positive(s.semi_axes[i], "semi_axes");
                   for (int i = 0; i < 2; ++i) {
                     if (!(s.exponents[i] >= 2.0) || !std::isfinite(s.exponents[i])) {
                       throw std::invalid_argument("exponents must be >= 2 (got " +
                                                   std::to_string(s.exponents[i]) + ")");
                     }
                   }
                 },
             },
             shape);
}

double implicit_value(const SurfaceModel& surface, const Vec3& x) {
  return std::visit(Overloaded{
                        [&](const PlaneSurface& s) { return s.normal.dot(x - s.point); },
                        [&](const SphereSurface& s) { return (x - s.center).norm() - s.radius; },
                        [&](const CylinderSurface& s) {
                          const Vec3 d = x - s.point;
                          return (d - d.dot(s.axis) * s.axis).norm() - s.radius;
                        },
                        [&](const SuperellipsoidSurface& s) {
                          return char_length(s) * (gauge(s, x - s.center) - 1.0);
                        },
                    },
                    surface.shape);
}

Vec3 surface_gradient(const SurfaceModel& s, const Vec3& x) {
  const Vec3 g = raw_gradient(s, x);
  const double n = g.norm();
  if (!(n >= kGradientFloor)) {
    throw SingularityError("surface gradient vanishes at the query point");
  }
  return g / n;
}

Vec3 project_to_surface(const SurfaceModel& surface, const Vec3& x) {
  return std::visit(
      Overloaded{
          [&](const PlaneSurface& s) -> Vec3 { return x - s.normal.dot(x - s.point) * s.normal; },
          [&](const SphereSurface& s) -> Vec3 {
            const Vec3 d = x - s.center;
            const double n = d.norm();
            if (!(n > 0.0)) throw SingularityError("cannot project the sphere center");
            return s.center + (s.radius / n) * d;
          },
          [&](const CylinderSurface& s) -> Vec3 {
            const Vec3 d = x - s.point;
            const Vec3 axial = d.dot(s.axis) * s.axis;
            const Vec3 radial = d - axial;
            const double n = radial.norm();
            if (!(n > 0.0)) throw SingularityError("cannot project a point on the cylinder axis");
            return s.point + axial + (s.radius / n) * radial;
          },
          [&](const SuperellipsoidSurface& s) -> Vec3 {
            return project_superellipsoid(surface, s, x);
          },
      },
      surface.shape);
}

ContactForce contact_force(const SurfaceModel& s, const Vec3& x) {
  ContactForce out;
  const Vec3 x0 = project_to_surface(s, x);
  out.state.contact_point = x0;
  out.state.normal = surface_gradient(s, x0);
  if (implicit_value(s, x) < 0.0) {
    out.state.penetration = (x - x0).norm();
    out.state.in_contact = out.state.penetration > 0.0;
    out.force = s.stiffness * out.state.penetration;
  }
  return out;
}

Vec3 contact_moment(const WristGeometry& wrist, const Vec3& z_e, const Vec3& normal,
                    double force) {
  return wrist.radius * force * z_e.cross(normal);
}

Wrench assemble_wrench(const Vec3& force, const Vec3& moment, Frame frame) {
  return Wrench{force, moment, frame};
}

double alignment_angle(const Vec3& z_e, const Vec3& normal) {
  const Vec3 inward = -normal;
  return std::atan2(z_e.cross(inward).norm(), z_e.dot(inward));
}

double tangency_residual(const SurfaceModel& s, const Vec3& x, const Vec3& v) {
  return surface_gradient(s, x).dot(v);
}

void SensorConfig::validate() const {
  require_positive(cutoff_hz, "cutoff_hz");
  if (!(force_noise_std >= 0.0) || !(moment_noise_std >= 0.0)) {
    throw std::invalid_argument("sensor noise std must be >= 0");
  }
}

SensorModel::SensorModel(const SensorConfig& config, std::uint64_t seed, const Vec6& initial_state)
    : config_(config), rng_(seed), state_(initial_state) {
  config_.validate();
  if (!state_.allFinite()) throw NonFiniteError("sensor filter state must be finite");
}

Wrench SensorModel::read(const Wrench& true_wrench, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sensor_read: dt must be > 0");
  if (true_wrench.frame != Frame::kEndEffector) {
    throw FrameMismatchError("sensor_read: the wrist sensor reads end-effector wrenches");
  }
  Vec6 u = true_wrench.vector();
  for (int i = 0; i < 6; ++i) {
    const double std_dev = i < 3 ? config_.force_noise_std : config_.moment_noise_std;
    u[i] += std_dev * normal_(rng_);
  }
  const double time_constant = 1.0 / (2.0 * std::numbers::pi * config_.cutoff_hz);
  const double gain = dt / (dt + time_constant);
  state_ += gain * (u - state_);
  if (!state_.allFinite()) throw NonFiniteError("sensor filter state became non-finite");
  return Wrench::from_vector(state_, Frame::kEndEffector);
}

}  // namespace grasp
