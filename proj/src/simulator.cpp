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

#include "grasp/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace grasp {
namespace {

constexpr std::uint64_t kSensorStream = 1;

void parallel_for(std::size_t n, unsigned max_parallel,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(n, std::max(1u, max_parallel)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::string> Scenario::violations() const {
  std::vector<std::string> out;
  auto capture = [&out](const char* section, const auto& check) {
    try {
      check();
    } catch (const std::exception& e) {
      out.push_back(std::string(section) + ": " + e.what());
    }
  };
  capture("plant", [&] { plant.validate(); });
  capture("surface", [&] { surface.validate(); });
  capture("sensor", [&] { sensor.validate(); });
  if (!(wrist.radius > 0.0)) out.push_back("wrist: radius must be > 0");
  for (const auto& v : policy.violations()) out.push_back("policy: " + v);
  if (initial_twist.frame != Frame::kEndEffector || setpoints.v_d.frame != Frame::kEndEffector) {
    out.push_back("twists must be expressed in the end-effector frame");
  }
  if (!(std::abs(initial_pose.orientation.norm() - 1.0) < 1e-9)) {
    out.push_back("plant: pose orientation must be a unit quaternion");
  }
  if (!(run.dt > 0.0 && run.dt <= 0.01)) out.push_back("run: dt must lie in (0, 0.01]");
  if (!(run.duration >= run.dt) || !std::isfinite(run.duration)) {
    out.push_back("run: duration must be >= dt");
  }
  return out;
}

void Scenario::validate() const {
  const auto v = violations();
  if (!v.empty()) throw std::invalid_argument(v.front());
}

bool Scenario::operator==(const Scenario& o) const {
  return plant == o.plant && initial_pose == o.initial_pose &&
         initial_twist.frame == o.initial_twist.frame &&
         initial_twist.vector() == o.initial_twist.vector() && surface == o.surface &&
         wrist == o.wrist && sensor == o.sensor && policy == o.policy &&
         setpoints == o.setpoints && run == o.run;
}

Simulation::Simulation(const Scenario& scenario)
    : scenario_(scenario),
      plant_(scenario.plant, scenario.initial_pose, scenario.initial_twist),
      sensor_(scenario.sensor, mix_seed(scenario.run.seed, kSensorStream)),
      command_(scenario.initial_twist) {
  scenario_.validate();
}

TraceRecord Simulation::evaluate() {
  const Scenario& sc = scenario_;
  const Pose& pose = plant_.pose();
  const RotationMatrix r = pose.rotation();
  const Vec3 z_e = r.column(2);

  const ContactForce c = contact_force(sc.surface, pose.position);
  const bool touching = c.state.in_contact && c.state.penetration > kContactPenetrationFloor;
  const double magnitude = touching ? c.force : 0.0;
  const Vec3& n = c.state.normal;

  // The sensor reads the push the end-effector exerts on the object.
  const Wrench true_base = assemble_wrench(-magnitude * n, contact_moment(sc.wrist, z_e, n, magnitude),
                                           Frame::kBase);
  const Wrench measured = sensor_.read(wrench_to_ee(true_base, r), sc.run.dt);
  const Vec6 fb = feedback_wrench(measured, sc.setpoints, sc.policy);
  const Vec6 accel = acceleration_policy(plant_.twist(), sc.setpoints, fb, sc.policy);

  TraceRecord rec;
  rec.t = time();
  rec.pose = pose;
  rec.twist = plant_.twist();
  rec.measured = measured;
  rec.gate = gate_value(measured.force.y(), sc.policy);
  rec.contact = touching;
  rec.alignment_angle = alignment_angle(z_e, n);
  rec.commanded_accel = accel;
  rec.penetration = touching ? c.state.penetration : 0.0;
  rec.true_force = magnitude;
  rec.normal = n;

  if (!pose.position.allFinite() || !pose.orientation.coeffs().allFinite() ||
      !rec.twist.vector().allFinite() || !measured.vector().allFinite() || !accel.allFinite() ||
      !std::isfinite(rec.alignment_angle)) {
    std::ostringstream os;
    os << "non-finite simulation state at t = " << rec.t << " s (tick " << tick_ << ")";
    throw NonFiniteError(os.str());
  }
  return rec;
}

TraceRecord Simulation::observe() { return evaluate(); }

TraceRecord Simulation::step() {
  TraceRecord rec = evaluate();
  command_ = command_ + Twist::from_vector(rec.commanded_accel * scenario_.run.dt,
                                           Frame::kEndEffector);
  plant_.step(command_, scenario_.run.dt);
  ++tick_;
  return rec;
}

std::int64_t tick_count(const RunConfig& run) {
  // Tolerate duration/dt landing a hair below an integer.
  return static_cast<std::int64_t>(std::floor(run.duration / run.dt + 1e-9));
}

RunResult run(const Scenario& scenario, const SettlingTolerances& tolerances) {
  Simulation sim(scenario);
  const std::int64_t n = tick_count(scenario.run);
  RunResult out;
  out.trace.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k < n; ++k) out.trace.push_back(sim.step());
  out.trace.push_back(sim.observe());
  out.metrics = compute_metrics(out.trace, scenario.setpoints, tolerances);
  return out;
}

std::vector<RunResult> run_batch(std::span<const Scenario> scenarios, unsigned max_parallel,
                                 const SettlingTolerances& tolerances) {
  std::vector<RunResult> results(scenarios.size());
  parallel_for(scenarios.size(), max_parallel,
               [&](std::size_t i) { results[i] = run(scenarios[i], tolerances); });
  return results;
}

std::optional<double> settling_time(std::span<const double> t, std::span<const double> error,
                                    double tol) {
  if (t.size() != error.size()) throw std::invalid_argument("settling_time: size mismatch");
  if (t.empty()) return std::nullopt;
  std::size_t k = t.size();
  while (k > 0 && std::abs(error[k - 1]) <= tol) --k;
  if (k == t.size()) return std::nullopt;
  return t[k];
}

Metrics compute_metrics(std::span<const TraceRecord> trace, const Setpoints& sp,
                        const SettlingTolerances& tol) {
  Metrics m;
  if (trace.empty()) return m;
  const std::size_t n = trace.size();
  std::vector<double> t(n), vel(n), force(n), align(n);
  const Vec6 v_d = sp.v_d.vector();
  for (std::size_t k = 0; k < n; ++k) {
    const TraceRecord& r = trace[k];
    t[k] = r.t;
    vel[k] = (r.twist.vector() - v_d).cwiseAbs().maxCoeff();
    force[k] = r.measured.force.z() - sp.F_dze;
    align[k] = r.alignment_angle;
    m.max_penetration = std::max(m.max_penetration, r.penetration);
  }
  const double force_tol = sp.F_dze != 0.0 ? tol.force_fraction * std::abs(sp.F_dze) : tol.force_floor;
  m.velocity_settling = settling_time(t, vel, tol.velocity);
  m.force_settling = settling_time(t, force, force_tol);
  m.alignment_settling = settling_time(t, align, tol.alignment);
  m.final_alignment_angle = align.back();

  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double sum = 0.0;
  for (std::size_t k = n - tail; k < n; ++k) sum += force[k];
  m.steady_force_error = sum / static_cast<double>(tail);
  return m;
}

std::vector<ErrorDynamicsSample> error_dynamics_samples(std::span<const TraceRecord> trace,
                                                        const Setpoints& sp,
                                                        const PolicyParams& params) {
  std::vector<ErrorDynamicsSample> out;
  out.reserve(trace.size());
  for (const auto& r : trace) {
    out.push_back({r.t, r.twist.vector(), feedback_wrench(r.measured, sp, params)});
  }
  return out;
}

double integrated_tangential_speed(std::span<const TraceRecord> trace, double t0, double t1) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const TraceRecord& r = trace[k];
    if (r.t < t0 || r.t >= t1) continue;
    const Vec3 v = r.pose.rotation() * r.twist.linear;
    const Vec3 tangential = v - r.normal.dot(v) * r.normal;
    total += tangential.norm() * (trace[k + 1].t - r.t);
  }
  return total;
}

PlanarCrossCheckResult run_planar_cross_check(const PlanarCrossCheckConfig& config) {
  config.model.validate();
  config.gains.validate();
  const TwoLinkModel& model = config.model;

  JointState joints{config.q0, Vec2::Zero()};
  DisturbanceModel no_disturbance(0.0);

  VelocityModeConfig ideal;
  ideal.response = VelocityModeConfig::Response::kIdeal;
  ideal.saturation_linear = 1e3;
  ideal.saturation_angular = 1e3;
  Pose start;
  start.position << end_effector_position(model, config.q0), 0.0;
  VelocityModePlant plant(ideal, start);

  Setpoints sp;
  sp.v_d = Twist{Vec3(config.v_d.x(), config.v_d.y(), 0.0), Vec3::Zero(), Frame::kEndEffector};
  const Twist xdot_d{sp.v_d.linear, Vec3::Zero(), Frame::kBase};
  const Wrench no_wrench = Wrench::zero(Frame::kBase);
  Twist command = Twist::zero(Frame::kEndEffector);

  const std::int64_t n = tick_count(RunConfig{config.duration, config.dt, 0});
  PlanarCrossCheckResult out;
  for (std::int64_t k = 0;; ++k) {
    out.t.push_back(static_cast<double>(k) * config.dt);
    out.torque_path.push_back(end_effector_position(model, joints.q));
    out.velocity_path.push_back(plant.pose().position.head<2>());
    if (k == n) break;

    const Twist xdot = joint_to_cartesian_vel(two_link_jacobian(model, joints.q), joints.qdot);
    const VecX tau = torque_law(model, joints, Vec6::Zero(), xdot, xdot_d, no_wrench, no_wrench,
                                config.gains, config.options);
    const VecX qdd = forward_dynamics(model, joints, tau, no_wrench, no_disturbance);
    joints.qdot += qdd * config.dt;
    joints.q += joints.qdot * config.dt;

    const Vec6 a = acceleration_policy(plant.twist(), sp, Vec6::Zero(), config.gains);
    command = command + Twist::from_vector(a * config.dt, Frame::kEndEffector);
    plant.step(command, config.dt);
  }
  const Vec2 origin = out.velocity_path.front();
  for (std::size_t k = 0; k < out.t.size(); ++k) {
    out.max_deviation = std::max(out.max_deviation, (out.torque_path[k] - out.velocity_path[k]).norm());
    out.path_extent = std::max(out.path_extent, (out.velocity_path[k] - origin).norm());
  }
  return out;
}

}  // namespace grasp
