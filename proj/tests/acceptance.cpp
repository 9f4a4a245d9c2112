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


// Acceptance criteria, one PASS/FAIL line each. Exit status is nonzero when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grasp/contact.hpp"
#include "grasp/kinematics.hpp"
#include "grasp/plant.hpp"
#include "grasp/scenarios.hpp"
#include "grasp/simulator.hpp"
#include "grasp/trace_io.hpp"

using namespace grasp;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <typename F>
double tail_mean(const std::vector<TraceRecord>& trace, F value) {
  const std::size_t first = trace.size() - std::max<std::size_t>(1, trace.size() / 10);
  double sum = 0.0;
  for (std::size_t k = first; k < trace.size(); ++k) sum += value(trace[k]);
  return sum / static_cast<double>(trace.size() - first);
}

std::string fmt(double v) { return format_number(v); }

// 1. x^T (Mdot - 2C) x vanishes.
Outcome skew_symmetry() {
  constexpr double kBound = 1e-6, kSeconds = 1.0, h = 1e-6;
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  const TwoLinkModel model{1.3, 0.8, 0.7, 0.5, 9.81, 0.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec2 q(uniform(rng, -M_PI, M_PI), uniform(rng, -M_PI, M_PI));
    const Vec2 qd(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    const Vec2 x(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    const Mat2 mdot = (mass_matrix(model, q + h * qd) - mass_matrix(model, q - h * qd)) / (2.0 * h);
    worst = std::max(worst, std::abs(x.dot((mdot - 2.0 * coriolis_matrix(model, q, qd)) * x)));
  }
  const double elapsed = seconds_since(start);
  return {worst < kBound && elapsed < kSeconds,
          "max |x^T (Mdot - 2C) x| = " + fmt(worst) + " (< " + fmt(kBound) + "), " + fmt(elapsed) +
              " s (< 1 s)"};
}

// 2. Right inverse and null-space projection.
Outcome moore_penrose() {
  constexpr double kBound = 1e-9, kSeconds = 1.0;
  const auto start = Clock::now();
  std::mt19937_64 rng(102);
  double inv = 0.0, null = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int rows = 1 + i % 6;
    const int cols = rows + static_cast<int>(uniform(rng, 0.0, 9.0 - rows + 0.999));
    MatX j(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) j(r, c) = uniform(rng, -1.0, 1.0);
    const MatX p = jacobian_pinv(j);
    inv = std::max(inv, (j * p - MatX::Identity(rows, rows)).cwiseAbs().rowwise().sum().maxCoeff());
    VecX v(cols);
    for (int c = 0; c < cols; ++c) v[c] = uniform(rng, -1.0, 1.0);
    null = std::max(null, (j * (null_projector(j) * v)).norm() / v.norm());
  }
  const double elapsed = seconds_since(start);
  return {inv < kBound && null < kBound && elapsed < kSeconds,
          "max ||J J+ - I||_inf = " + fmt(inv) + ", max ||J N v|| / ||v|| = " + fmt(null) + " (< " +
              fmt(kBound) + "), " + fmt(elapsed) + " s (< 1 s)"};
}

// 3. Free-space error decays as exp(-4 t).
Outcome error_decay() {
  constexpr double kRelative = 0.01, kSeconds = 5.0;
  const auto start = Clock::now();
  Scenario sc;
  sc.plant.response = VelocityModeConfig::Response::kIdeal;
  sc.surface = SurfaceModel::plane(Vec3(0.0, 0.0, -10.0), Vec3::UnitZ(), 5000.0);
  sc.policy.M_d = Vec6::Ones();
  sc.policy.B_d = Vec6::Constant(4.0);
  const Vec6 vd = (Vec6() << 0.05, -0.03, 0.02, 0.1, -0.2, 0.15).finished();
  sc.setpoints.v_d = Twist::from_vector(vd, Frame::kEndEffector);
  sc.run = RunConfig{1.0, 5e-4, 3};
  // No contact and no sensor noise, so the force feedback is exactly zero.
  sc.sensor.force_noise_std = 0.0;
  sc.sensor.moment_noise_std = 0.0;
  sc.setpoints.F_dye = 0.0;
  sc.setpoints.F_dze = 0.0;
  const auto r = run(sc);
  double worst = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    const auto& rec = r.trace.at(static_cast<std::size_t>(std::lround(t / sc.run.dt)));
    for (int i = 0; i < 6; ++i) {
      const double e = rec.twist.vector()[i] - vd[i];
      worst = std::max(worst, std::abs(e / (-vd[i] * std::exp(-4.0 * t)) - 1.0));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < kRelative && elapsed < kSeconds,
          "max |e(t) / (e(0) exp(-4t)) - 1| at t = 0.25, 0.5, 1 s = " + fmt(worst) + " (< 0.01), " +
              fmt(elapsed) + " s (< 5 s)"};
}

// 4. Steady normal force and penetration on a plane.
Outcome force_regulation() {
  constexpr double kRelative = 0.02, kForce = 5.0;
  bool ok = true;
  std::ostringstream os;
  for (double k : {1000.0, 5000.0, 20000.0}) {
    Scenario sc = plane_align_scenario();
    sc.surface.stiffness = k;
    const auto r = run(sc);
    const double f = tail_mean(r.trace, [](const auto& x) { return x.true_force; });
    const double pen = tail_mean(r.trace, [](const auto& x) { return x.penetration; });
    const double ef = std::abs(f / kForce - 1.0);
    const double ep = std::abs(pen / (kForce / k) - 1.0);
    ok = ok && ef < kRelative && ep < kRelative;
    os << "K=" << k << ": F=" << fmt(f) << " N, d=" << fmt(pen * 1e3) << " mm; ";
  }
  os << "bounds 5 N and 5/K, +-2%";
  return {ok, os.str()};
}

double strict_tau_violation(const std::vector<TraceRecord>& trace, std::size_t peak) {
  double worst = 0.0;
  for (std::size_t k = peak + 1; k < trace.size(); ++k) {
    worst = std::max(worst, std::abs(trace[k].measured.moment.y()) -
                                std::abs(trace[k - 1].measured.moment.y()));
  }
  return worst;
}

std::size_t tau_peak(const std::vector<TraceRecord>& trace) {
  std::size_t peak = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (std::abs(trace[k].measured.moment.y()) > std::abs(trace[peak].measured.moment.y())) peak = k;
  }
  return peak;
}

// 5. Alignment from a 20 deg tilt.
Outcome alignment() {
  constexpr double kAngle = 0.5 * kDeg, kMoment = 1e-3, kWithin = 5.0, kNoiseBand = 0.05;
  const Scenario sc = plane_align_scenario();
  const auto r = run(sc);
  std::vector<double> t, angle, moment;
  for (const auto& rec : r.trace) {
    t.push_back(rec.t);
    angle.push_back(rec.alignment_angle);
    moment.push_back(rec.measured.moment.norm());
  }
  const auto ta = settling_time(t, angle, kAngle);
  const auto tm = settling_time(t, moment, kMoment);

  // tau_ye after its peak: measured signal stays within a noise band of
  // its running minimum; the noise-free rerun decays strictly.
  const std::size_t peak = tau_peak(r.trace);
  const double peak_value = std::abs(r.trace[peak].measured.moment.y());
  double running_min = peak_value, rise = 0.0;
  for (std::size_t k = peak; k < r.trace.size(); ++k) {
    const double v = std::abs(r.trace[k].measured.moment.y());
    rise = std::max(rise, v - running_min);
    running_min = std::min(running_min, v);
  }
  Scenario clean = sc;
  clean.sensor.force_noise_std = 0.0;
  clean.sensor.moment_noise_std = 0.0;
  const auto rc = run(clean);
  const double strict = strict_tau_violation(rc.trace, tau_peak(rc.trace));

  const bool ok = ta && *ta <= kWithin && tm && *tm <= kWithin && rise <= kNoiseBand * peak_value &&
                  strict <= 0.0;
  std::ostringstream os;
  os << "angle < 0.5 deg from t=" << (ta ? fmt(*ta) : "never") << " s, |m_e| < 1e-3 N m from t="
     << (tm ? fmt(*tm) : "never") << " s (<= 5 s); tau_ye peak " << fmt(peak_value)
     << " N m, max rise after peak " << fmt(rise) << " (<= 5% of peak), noise-free max step increase "
     << fmt(strict) << " (<= 0)";
  return {ok, os.str()};
}

// 6. Tangency while sliding on a sphere.
Outcome tangency() {
  constexpr double kBound = 1e-3;
  const Scenario sc = sphere_slide_scenario();
  const auto r = run(sc);
  std::vector<double> t, force_error;
  for (const auto& rec : r.trace) {
    t.push_back(rec.t);
    force_error.push_back(rec.true_force - sc.setpoints.F_dze);
  }
  const auto settled = settling_time(t, force_error, 0.02 * sc.setpoints.F_dze);
  if (!settled) return {false, "contact force never settled"};
  double worst = 0.0;
  for (const auto& rec : r.trace) {
    if (rec.t < *settled) continue;
    worst = std::max(worst, std::abs(rec.normal.dot(rec.pose.rotation() * rec.twist.linear)));
  }
  return {worst < kBound, "force settled at t=" + fmt(*settled) + " s, then max |n . v| = " + fmt(worst) +
                              " m/s (< 1e-3)"};
}

// 7. Gate shape, and the alpha sweep defers tangential motion.
Outcome gate() {
  bool shape = true;
  for (double alpha : {0.0, 0.5, 1.0}) {
    PolicyParams p;
    p.alpha = alpha;
    shape = shape && gate_value(0.0, p) == 1.0;
    double previous = 1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double f = 0.01 * i;
      const double g = gate_value(f, p);
      shape = shape && g <= previous && g >= 1.0 - alpha && g <= 1.0 && g == gate_value(-f, p);
      previous = g;
    }
  }
  // Same seeding as the command-line sweep.
  const Scenario base = tilted_slide_scenario();
  std::vector<Scenario> sweep;
  const double alphas[] = {0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    Scenario sc = base;
    sc.policy.alpha = alphas[i];
    sc.run.seed = mix_seed(base.run.seed, i);
    sweep.push_back(sc);
  }
  const auto results = run_batch(sweep, 3);
  std::vector<double> path;
  for (const auto& r : results) path.push_back(integrated_tangential_speed(r.trace, 0.0, 1.0));
  const bool decreasing = path[0] > path[1] && path[1] > path[2];
  return {shape && decreasing, std::string("gate shape ") + (shape ? "ok" : "violated") +
                                   "; first-second tangential path for alpha = 0, 0.5, 1: " + fmt(path[0]) +
                                   ", " + fmt(path[1]) + ", " + fmt(path[2]) + " m (strictly decreasing)"};
}

// 8. Analytic vs central-difference surface gradients.
Outcome gradients() {
  constexpr double kBound = 1e-6, h = 1e-6;
  const std::vector<SurfaceModel> surfaces{
      SurfaceModel::plane(Vec3(0.0, 0.1, -0.02), Vec3(1.0, -2.0, 3.0).normalized(), 5000.0),
      SurfaceModel::sphere(Vec3(0.05, -0.02, 0.0), 0.08, 5000.0),
      SurfaceModel::cylinder(Vec3(0.01, 0.0, 0.0), Vec3(0.0, 1.0, 1.0).normalized(), 0.05, 5000.0),
      SurfaceModel::superellipsoid(Vec3(0.0, 0.0, 0.1), Vec3(0.035, 0.035, 0.1), Eigen::Vector2d(2.0, 6.0),
                                   5000.0)};
  std::mt19937_64 rng(108);
  double worst = 0.0;
  for (const auto& s : surfaces) {
    int accepted = 0;
    while (accepted < 100) {
      const Vec3 x(uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2), uniform(rng, -0.1, 0.3));
      const double phi = implicit_value(s, x);
      if (phi < 0.002 || phi > 0.1) continue;
      ++accepted;
      Vec3 fd;
      for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = h;
        fd[k] = (implicit_value(s, x + e) - implicit_value(s, x - e)) / (2.0 * h);
      }
      worst = std::max(worst, (surface_gradient(s, x) - fd.normalized()).norm());
    }
  }
  return {worst < kBound, "max relative gradient error over 4 surface kinds x 100 points = " + fmt(worst) +
                              " (< 1e-6)"};
}

// 9. Planar torque-law backend vs the ideal velocity-mode plant.
Outcome cross_backend() {
  constexpr double kBound = 0.05;
  const auto r = run_planar_cross_check(PlanarCrossCheckConfig{});
  return {r.relative_deviation() < kBound,
          "max deviation " + fmt(r.max_deviation) + " m over a " + fmt(r.path_extent) + " m path = " +
              fmt(100.0 * r.relative_deviation()) + "% (< 5%)"};
}

// 10. Byte-identical traces.
Outcome determinism() {
  const Scenario sc = plane_align_scenario();
  const std::string a = trace_csv(run(sc).trace);
  const std::string b = trace_csv(run(sc).trace);
  std::vector<Scenario> sweep;
  for (std::size_t i = 0; i < 4; ++i) {
    Scenario s = tilted_slide_scenario();
    s.run.duration = 2.0;
    s.surface.stiffness = 1000.0 * (i + 1);
    s.run.seed = mix_seed(s.run.seed, i);
    sweep.push_back(s);
  }
  const auto serial = run_batch(sweep, 1);
  const auto parallel = run_batch(sweep, 4);
  bool same = true;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    same = same && trace_csv(serial[i].trace) == trace_csv(parallel[i].trace);
  }
  return {a == b && same, std::string("repeat run ") + (a == b ? "identical" : "differs") + " (" +
                              std::to_string(a.size()) + " bytes); 4-run sweep at 1 vs 4 workers " +
                              (same ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"skew-symmetry", skew_symmetry},   {"moore-penrose", moore_penrose},
      {"error-decay", error_decay},       {"force-regulation", force_regulation},
      {"alignment", alignment},           {"tangency", tangency},
      {"gate", gate},                     {"gradient-oracle", gradients},
      {"cross-backend", cross_backend},   {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.passed ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
