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

#ifndef GRASP_SIMULATOR_HPP_
#define GRASP_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grasp/contact.hpp"
#include "grasp/kinematics.hpp"
#include "grasp/plant.hpp"
#include "grasp/policy.hpp"

namespace grasp {

struct RunConfig {
  double duration = 5.0;  // s
  double dt = 5e-4;       // s
  std::uint64_t seed = 0;
  bool operator==(const RunConfig&) const = default;
};

struct Scenario {
  VelocityModeConfig plant;
  Pose initial_pose;
  Twist initial_twist = Twist::zero(Frame::kEndEffector);
  SurfaceModel surface;
  WristGeometry wrist;
  SensorConfig sensor;
  PolicyParams policy;
  Setpoints setpoints;
  RunConfig run;

  std::vector<std::string> violations() const;
  void validate() const;
  bool operator==(const Scenario& other) const;
};

// Contact flag requires more penetration than this.
inline constexpr double kContactPenetrationFloor = 1e-7;

struct TraceRecord {
  double t = 0.0;
  Pose pose;
  Twist twist = Twist::zero(Frame::kEndEffector);      // achieved, end-effector frame
  Wrench measured = Wrench::zero(Frame::kEndEffector);  // filtered sensor reading
  double gate = 1.0;
  bool contact = false;
  double alignment_angle = 0.0;  // rad, between z_e and -n
  Vec6 commanded_accel = Vec6::Zero();
  // Ground truth, not part of the CSV trace.
  double penetration = 0.0;
  double true_force = 0.0;
  Vec3 normal = Vec3::UnitZ();
};

// One closed-loop run. Each tick evaluates contact, assembles the true
// wrench in the end-effector frame, reads the sensor, forms the feedback
// vector and the policy acceleration, then integrates the command
// (v += a dt), lets the plant respond, and updates the pose.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);

  // Records the current instant, then advances one tick.
  TraceRecord step();
  // Records the current instant without advancing.
  TraceRecord observe();

  std::int64_t tick() const { return tick_; }
  double time() const { return static_cast<double>(tick_) * scenario_.run.dt; }
  const VelocityModePlant& plant() const { return plant_; }
  const Twist& command() const { return command_; }

 private:
  TraceRecord evaluate();

  Scenario scenario_;
  VelocityModePlant plant_;
  SensorModel sensor_;
  Twist command_;
  std::int64_t tick_ = 0;
};

struct SettlingTolerances {
  double velocity = 1e-3;        // m/s (max-abs over the twist error)
  double force_fraction = 0.02;  // of |F_dze|
  double force_floor = 0.02;     // N, used when F_dze == 0
  double alignment = 0.5 * 3.14159265358979323846 / 180.0;  // rad
};

struct Metrics {
  double final_alignment_angle = 0.0;
  // Mean of F_ze - F_dze over the last 10% of the trace.
  double steady_force_error = 0.0;
  // Empty when the signal never settles.
  std::optional<double> velocity_settling;
  std::optional<double> force_settling;
  std::optional<double> alignment_settling;
  double max_penetration = 0.0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  Metrics metrics;
};

std::int64_t tick_count(const RunConfig& run);

// floor(duration / dt) + 1 records at t = k dt.
RunResult run(const Scenario& scenario, const SettlingTolerances& tolerances = {});

// Independent runs, at most max_parallel at a time; results keep input order.
std::vector<RunResult> run_batch(std::span<const Scenario> scenarios, unsigned max_parallel,
                                 const SettlingTolerances& tolerances = {});

// Smallest t_k such that |error| <= tol for every sample from k on.
std::optional<double> settling_time(std::span<const double> t, std::span<const double> error,
                                    double tol);

Metrics compute_metrics(std::span<const TraceRecord> trace, const Setpoints& sp,
                        const SettlingTolerances& tolerances = {});

std::vector<ErrorDynamicsSample> error_dynamics_samples(std::span<const TraceRecord> trace,
                                                        const Setpoints& sp,
                                                        const PolicyParams& params);

// Integral over [t0, t1] of the speed tangent to the surface (rectangle rule).
double integrated_tangential_speed(std::span<const TraceRecord> trace, double t0, double t1);

// Planar reduction: the two-link arm under the torque law versus the ideal
// velocity-mode plant running the acceleration policy, both in free space
// tracking the same constant Cartesian velocity.
struct PlanarCrossCheckConfig {
  TwoLinkModel model{1.0, 1.0, 0.5, 0.5, 0.0, 0.0};
  Vec2 q0{0.3, 1.2};
  Vec2 v_d{-0.1, -0.05};
  PolicyParams gains;
  TorqueLawOptions options;
  double duration = 2.0;
  double dt = 5e-4;
};

struct PlanarCrossCheckResult {
  std::vector<double> t;
  std::vector<Vec2> torque_path;
  std::vector<Vec2> velocity_path;
  double max_deviation = 0.0;   // m
  double path_extent = 0.0;     // m, max distance of the reference from its start
  double relative_deviation() const { return path_extent > 0.0 ? max_deviation / path_extent : 0.0; }
};

PlanarCrossCheckResult run_planar_cross_check(const PlanarCrossCheckConfig& config);

// SplitMix64 finalizer; used to derive per-stream and per-run seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace grasp

#endif  // GRASP_SIMULATOR_HPP_
