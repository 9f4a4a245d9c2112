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

#include "grasp/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

namespace grasp {
namespace {

constexpr const char* kSections[] = {"plant", "surface", "wrist", "sensor",
                                     "policy", "setpoints", "run"};

int line_of(const YAML::Node& node) {
  if (!node.IsDefined() || node.Mark().is_null()) return 0;
  return node.Mark().line + 1;
}

std::string format_message(const std::string& source, int line, const std::string& key,
                           const std::string& message) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  os << ": ";
  if (!key.empty()) os << key << ": ";
  os << message;
  return os.str();
}

// Typed access to one section; remembers which keys were read so leftovers
// can be rejected as unknown.
class Section {
 public:
  Section(const YAML::Node& root, std::string name, const std::string& source, RangeChecks checks)
      : name_(std::move(name)), source_(source), checks_(checks) {
    if (root.IsMap() && root[name_]) {
      node_ = root[name_];
      if (!node_.IsMap() && !node_.IsNull()) fail(line_of(node_), "", "section must be a mapping");
    }
    line_ = node_.IsDefined() ? line_of(node_) : 0;
  }

  bool present() const { return node_.IsDefined() && node_.IsMap(); }
  bool has(const std::string& key) const { return present() && node_[key]; }

  [[noreturn]] void fail(int line, const std::string& key, const std::string& message) const {
    const std::string full = key.empty() ? name_ : name_ + "." + key;
    throw ScenarioError(source_, line, full, message);
  }

  std::optional<YAML::Node> field(const std::string& key, bool required) {
    used_.insert(key);
    if (has(key)) return node_[key];
    if (required) fail(line_, key, "missing required key");
    return std::nullopt;
  }

  int key_line(const std::string& key) const { return has(key) ? line_of(node_[key]) : line_; }

  double number(const std::string& key, std::optional<double> fallback) {
    const auto n = field(key, !fallback.has_value());
    if (!n) return *fallback;
    return scalar(*n, key);
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    const auto n = field(key, false);
    if (!n) return fallback;
    try {
      return n->as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail(line_of(*n), key, "expected a non-negative integer");
    }
  }

  std::string text(const std::string& key, std::optional<std::string> fallback) {
    const auto n = field(key, !fallback.has_value());
    if (!n) return *fallback;
    if (!n->IsScalar()) fail(line_of(*n), key, "expected a string");
    return n->as<std::string>();
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vector(const std::string& key,
                                     std::optional<Eigen::Matrix<double, N, 1>> fallback) {
    const auto n = field(key, !fallback.has_value());
    if (!n) return *fallback;
    if (!n->IsSequence() || n->size() != static_cast<std::size_t>(N)) {
      fail(line_of(*n), key, "expected a list of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) out[i] = scalar((*n)[i], key);
    return out;
  }

  // Range check anchored at the key's line; skipped in unchecked mode.
  void check(bool ok, const std::string& key, const std::string& message) const {
    if (ok || checks_ == RangeChecks::kSkip) return;
    fail(key_line(key), key, message);
  }

  void reject_unknown() const {
    if (!present()) return;
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      if (!used_.count(key)) fail(line_of(it->first), key, "unknown key");
    }
  }

  int line() const { return line_; }

 private:
  double scalar(const YAML::Node& n, const std::string& key) const {
    double v = 0.0;
    try {
      if (!n.IsScalar()) throw YAML::Exception(YAML::Mark::null_mark(), "not a scalar");
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      fail(line_of(n), key, "expected a number");
    }
    if (!std::isfinite(v)) fail(line_of(n), key, "must be finite");
    return v;
  }

  YAML::Node node_;
  std::string name_;
  std::string source_;
  RangeChecks checks_;
  int line_ = 0;
  std::set<std::string> used_;
};

std::string positive_msg(double v) {
  std::ostringstream os;
  os << "must be > 0 (got " << v << ")";
  return os.str();
}

std::string unit_interval_msg(double v) {
  std::ostringstream os;
  os << "must lie in [0, 1] (got " << v << ")";
  return os.str();
}

std::string nonneg_msg(double v) {
  std::ostringstream os;
  os << "must be >= 0 (got " << v << ")";
  return os.str();
}

// Unit vectors are renormalized only when off by more than the stored
// tolerance, which keeps serialize/parse an exact round trip.
Vec3 unit_direction(Section& sec, const std::string& key) {
  const Vec3 v = sec.vector<3>(key, std::nullopt);
  const double n = v.norm();
  if (!(n > 0.0)) sec.fail(sec.has(key) ? 0 : sec.line(), key, "direction must be nonzero");
  return std::abs(n - 1.0) > 1e-12 ? Vec3(v / n) : v;
}

void positive_vec(Section& sec, const std::string& key, const Vec6& v, bool allow_zero) {
  for (int i = 0; i < 6; ++i) {
    sec.check(allow_zero ? v[i] >= 0.0 : v[i] > 0.0, key,
              "entry " + std::to_string(i) + " " + (allow_zero ? nonneg_msg(v[i]) : positive_msg(v[i])));
  }
}

void apply_overrides(YAML::Node& root, std::span<const ScenarioOverride> overrides,
                     const std::string& source) {
  for (const auto& o : overrides) {
    const auto dot = o.key.find('.');
    const std::string section = o.key.substr(0, dot);
    bool known = false;
    for (const char* s : kSections) known = known || section == s;
    if (dot == std::string::npos || !known || dot + 1 >= o.key.size()) {
      throw ScenarioError(source, 0, o.key, "override key must be <section>.<field>");
    }
    YAML::Node value;
    try {
      value = YAML::Load(o.value);
    } catch (const YAML::Exception& e) {
      throw ScenarioError(source, 0, o.key, "cannot parse override value '" + o.value + "'");
    }
    root[section][o.key.substr(dot + 1)] = value;
  }
}

Scenario interpret(const YAML::Node& root, const std::string& source, RangeChecks checks) {
  if (!root.IsMap()) throw ScenarioError(source, line_of(root), "", "document must be a mapping");
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string key = it->first.as<std::string>();
    bool known = false;
    for (const char* s : kSections) known = known || key == s;
    if (!known) throw ScenarioError(source, line_of(it->first), key, "unknown section");
  }

  Scenario sc;

  Section plant(root, "plant", source, checks);
  {
    const std::string kind = plant.text("kind", "velocity_mode");
    if (kind == "velocity_mode") {
      sc.plant.response = VelocityModeConfig::Response::kFirstOrderLag;
    } else if (kind == "ideal") {
      sc.plant.response = VelocityModeConfig::Response::kIdeal;
    } else {
      plant.fail(plant.key_line("kind"), "kind",
                 "expected velocity_mode or ideal (got '" + kind + "')");
    }
    const Vec6 tc = plant.vector<6>("time_constants", Vec6::Constant(0.01));
    positive_vec(plant, "time_constants", tc, false);
    for (int i = 0; i < 6; ++i) sc.plant.time_constants[i] = tc[i];
    sc.plant.saturation_linear = plant.number("saturation_linear", 0.5);
    plant.check(sc.plant.saturation_linear > 0.0, "saturation_linear",
                positive_msg(sc.plant.saturation_linear));
    sc.plant.saturation_angular = plant.number("saturation_angular", 1.5);
    plant.check(sc.plant.saturation_angular > 0.0, "saturation_angular",
                positive_msg(sc.plant.saturation_angular));
    sc.initial_pose.position = plant.vector<3>("position", Vec3::Zero());
    const Eigen::Vector4d q =
        plant.vector<4>("orientation", Eigen::Vector4d(1.0, 0.0, 0.0, 0.0));
    const double qn = q.norm();
    if (!(qn > 0.0)) plant.fail(plant.line(), "orientation", "quaternion must be nonzero");
    const Eigen::Vector4d qu = std::abs(qn - 1.0) > 1e-12 ? Eigen::Vector4d(q / qn) : q;
    sc.initial_pose.orientation = Eigen::Quaterniond(qu[0], qu[1], qu[2], qu[3]);
    sc.initial_twist =
        Twist::from_vector(plant.vector<6>("twist", Vec6::Zero()), Frame::kEndEffector);
    plant.reject_unknown();
  }

  Section surface(root, "surface", source, checks);
  {
    const std::string kind = surface.text("kind", std::nullopt);
    if (kind == "plane") {
      PlaneSurface p;
      p.point = surface.vector<3>("point", std::nullopt);
      p.normal = unit_direction(surface, "normal");
      sc.surface.shape = p;
    } else if (kind == "sphere") {
      SphereSurface s;
      s.center = surface.vector<3>("center", std::nullopt);
      s.radius = surface.number("radius", std::nullopt);
      surface.check(s.radius > 0.0, "radius", positive_msg(s.radius));
      sc.surface.shape = s;
    } else if (kind == "cylinder") {
      CylinderSurface c;
      c.point = surface.vector<3>("point", std::nullopt);
      c.axis = unit_direction(surface, "axis");
      c.radius = surface.number("radius", std::nullopt);
      surface.check(c.radius > 0.0, "radius", positive_msg(c.radius));
      sc.surface.shape = c;
    } else if (kind == "superellipsoid") {
      SuperellipsoidSurface e;
      e.center = surface.vector<3>("center", std::nullopt);
      e.semi_axes = surface.vector<3>("semi_axes", std::nullopt);
      for (int i = 0; i < 3; ++i) {
        surface.check(e.semi_axes[i] > 0.0, "semi_axes", positive_msg(e.semi_axes[i]));
      }
      e.exponents = surface.vector<2>("exponents", std::nullopt);
      for (int i = 0; i < 2; ++i) {
        surface.check(e.exponents[i] >= 2.0, "exponents", "must be >= 2");
      }
      sc.surface.shape = e;
    } else {
      surface.fail(surface.key_line("kind"), "kind",
                   "expected plane, sphere, cylinder or superellipsoid (got '" + kind + "')");
    }
    sc.surface.stiffness = surface.number("stiffness", std::nullopt);
    surface.check(sc.surface.stiffness > 0.0, "stiffness", positive_msg(sc.surface.stiffness));
    surface.reject_unknown();
  }

  Section wrist(root, "wrist", source, checks);
  sc.wrist.radius = wrist.number("radius", 0.04);
  wrist.check(sc.wrist.radius > 0.0, "radius", positive_msg(sc.wrist.radius));
  wrist.reject_unknown();

  Section sensor(root, "sensor", source, checks);
  sc.sensor.cutoff_hz = sensor.number("cutoff_hz", 5.0);
  sensor.check(sc.sensor.cutoff_hz > 0.0, "cutoff_hz", positive_msg(sc.sensor.cutoff_hz));
  sc.sensor.force_noise_std = sensor.number("force_noise_std", 0.05);
  sensor.check(sc.sensor.force_noise_std >= 0.0, "force_noise_std",
               nonneg_msg(sc.sensor.force_noise_std));
  sc.sensor.moment_noise_std = sensor.number("moment_noise_std", 0.002);
  sensor.check(sc.sensor.moment_noise_std >= 0.0, "moment_noise_std",
               nonneg_msg(sc.sensor.moment_noise_std));
  sensor.reject_unknown();

  Section policy(root, "policy", source, checks);
  const PolicyParams defaults;
  sc.policy.M_d = policy.vector<6>("M_d", defaults.M_d);
  positive_vec(policy, "M_d", sc.policy.M_d, false);
  sc.policy.B_d = policy.vector<6>("B_d", defaults.B_d);
  positive_vec(policy, "B_d", sc.policy.B_d, false);
  sc.policy.B_f = policy.vector<6>("B_f", defaults.B_f);
  positive_vec(policy, "B_f", sc.policy.B_f, true);
  sc.policy.alpha = policy.number("alpha", defaults.alpha);
  policy.check(sc.policy.alpha >= 0.0 && sc.policy.alpha <= 1.0, "alpha",
               unit_interval_msg(sc.policy.alpha));
  sc.policy.F_scale = policy.number("F_scale", defaults.F_scale);
  policy.check(sc.policy.F_scale > 0.0, "F_scale", positive_msg(sc.policy.F_scale));
  policy.reject_unknown();

  Section setpoints(root, "setpoints", source, checks);
  sc.setpoints.v_d =
      Twist::from_vector(setpoints.vector<6>("v_d", Vec6::Zero()), Frame::kEndEffector);
  sc.setpoints.vdot_d = setpoints.vector<6>("vdot_d", Vec6::Zero());
  sc.setpoints.F_dye = setpoints.number("F_dye", 0.0);
  sc.setpoints.F_dze = setpoints.number("F_dze", 0.0);
  setpoints.reject_unknown();

  Section run(root, "run", source, checks);
  sc.run.duration = run.number("duration", std::nullopt);
  sc.run.dt = run.number("dt", 5e-4);
  run.check(sc.run.dt > 0.0 && sc.run.dt <= 0.01, "dt", "must lie in (0, 0.01]");
  run.check(sc.run.duration >= sc.run.dt, "duration", "must be >= dt");
  sc.run.seed = run.integer("seed", 0);
  run.reject_unknown();

  if (checks == RangeChecks::kEnforce) {
    const auto remaining = sc.violations();
    if (!remaining.empty()) throw ScenarioError(source, 0, "", remaining.front());
  }
  return sc;
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void emit_vector(YAML::Emitter& out, const char* key, const auto& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << shortest(v[i]);
  out << YAML::EndSeq;
}

}  // namespace

ScenarioError::ScenarioError(std::string source, int line, std::string key,
                             const std::string& message)
    : std::runtime_error(format_message(source, line, key, message)),
      source_(std::move(source)),
      line_(line),
      key_(std::move(key)) {}

Scenario parse_scenario(std::string_view text, std::string_view source,
                        std::span<const ScenarioOverride> overrides, RangeChecks checks) {
  const std::string src(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(src, e.mark.is_null() ? 0 : e.mark.line + 1, "", e.msg);
  }
  if (!overrides.empty()) {
    if (!root.IsMap()) throw ScenarioError(src, 0, "", "document must be a mapping");
    apply_overrides(root, overrides, src);
  }
  try {
    return interpret(root, src, checks);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(src, e.mark.is_null() ? 0 : e.mark.line + 1, "", e.msg);
  }
}

Scenario load_scenario(const std::filesystem::path& path,
                       std::span<const ScenarioOverride> overrides, RangeChecks checks) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string(), 0, "", "cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string(), overrides, checks);
}

std::string serialize_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "plant" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value
      << (sc.plant.response == VelocityModeConfig::Response::kIdeal ? "ideal" : "velocity_mode");
  emit_vector(out, "time_constants", Eigen::Map<const Vec6>(sc.plant.time_constants.data()));
  out << YAML::Key << "saturation_linear" << YAML::Value << shortest(sc.plant.saturation_linear);
  out << YAML::Key << "saturation_angular" << YAML::Value << shortest(sc.plant.saturation_angular);
  emit_vector(out, "position", sc.initial_pose.position);
  const auto& q = sc.initial_pose.orientation;
  emit_vector(out, "orientation", Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()));
  emit_vector(out, "twist", sc.initial_twist.vector());
  out << YAML::EndMap;

  out << YAML::Key << "surface" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(sc.surface.kind()));
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneSurface>) {
          emit_vector(out, "point", s.point);
          emit_vector(out, "normal", s.normal);
        } else if constexpr (std::is_same_v<T, SphereSurface>) {
          emit_vector(out, "center", s.center);
          out << YAML::Key << "radius" << YAML::Value << shortest(s.radius);
        } else if constexpr (std::is_same_v<T, CylinderSurface>) {
          emit_vector(out, "point", s.point);
          emit_vector(out, "axis", s.axis);
          out << YAML::Key << "radius" << YAML::Value << shortest(s.radius);
        } else {
          emit_vector(out, "center", s.center);
          emit_vector(out, "semi_axes", s.semi_axes);
          emit_vector(out, "exponents", s.exponents);
        }
      },
      sc.surface.shape);
  out << YAML::Key << "stiffness" << YAML::Value << shortest(sc.surface.stiffness);
  out << YAML::EndMap;

  out << YAML::Key << "wrist" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "radius" << YAML::Value << shortest(sc.wrist.radius);
  out << YAML::EndMap;

  out << YAML::Key << "sensor" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "cutoff_hz" << YAML::Value << shortest(sc.sensor.cutoff_hz);
  out << YAML::Key << "force_noise_std" << YAML::Value << shortest(sc.sensor.force_noise_std);
  out << YAML::Key << "moment_noise_std" << YAML::Value << shortest(sc.sensor.moment_noise_std);
  out << YAML::EndMap;

  out << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  emit_vector(out, "M_d", sc.policy.M_d);
  emit_vector(out, "B_d", sc.policy.B_d);
  emit_vector(out, "B_f", sc.policy.B_f);
  out << YAML::Key << "alpha" << YAML::Value << shortest(sc.policy.alpha);
  out << YAML::Key << "F_scale" << YAML::Value << shortest(sc.policy.F_scale);
  out << YAML::EndMap;

  out << YAML::Key << "setpoints" << YAML::Value << YAML::BeginMap;
  emit_vector(out, "v_d", sc.setpoints.v_d.vector());
  emit_vector(out, "vdot_d", sc.setpoints.vdot_d);
  out << YAML::Key << "F_dye" << YAML::Value << shortest(sc.setpoints.F_dye);
  out << YAML::Key << "F_dze" << YAML::Value << shortest(sc.setpoints.F_dze);
  out << YAML::EndMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "duration" << YAML::Value << shortest(sc.run.duration);
  out << YAML::Key << "dt" << YAML::Value << shortest(sc.run.dt);
  out << YAML::Key << "seed" << YAML::Value << sc.run.seed;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace grasp
