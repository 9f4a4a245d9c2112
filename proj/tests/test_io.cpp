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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "grasp/scenario_io.hpp"
#include "grasp/scenarios.hpp"
#include "grasp/trace_io.hpp"

#ifndef GRASP_SCENARIO_DIR
#error "GRASP_SCENARIO_DIR must point at the bundled scenarios"
#endif

using namespace grasp;

namespace {

constexpr const char* kMinimal = R"(surface:
  kind: sphere
  center: [0, 0, 0]
  radius: 0.1
  stiffness: 2000
run:
  duration: 1.5
)";

std::string error_of(const std::string& text, std::span<const ScenarioOverride> overrides = {}) {
  try {
    parse_scenario(text, "test.yaml", overrides);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("minimal scenario takes documented defaults") {
  const Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.surface.kind() == SurfaceKind::kSphere);
  CHECK(sc.surface.stiffness == 2000.0);
  CHECK(sc.run.duration == 1.5);
  CHECK(sc.run.dt == 5e-4);
  CHECK(sc.run.seed == 0);
  CHECK(sc.policy == PolicyParams{});
  CHECK(sc.plant == VelocityModeConfig{});
  CHECK(sc.wrist.radius == 0.04);
  CHECK(sc.sensor == SensorConfig{});
}

TEST_CASE("diagnostics name the key and line") {
  const std::string negative = std::string(kMinimal) + "wrist:\n  radius: -1\n";
  CHECK(error_of(negative) == "test.yaml:9: wrist.radius: must be > 0 (got -1)");

  std::string stiff = kMinimal;
  stiff.replace(stiff.find("2000"), 4, "-5");
  CHECK(error_of(stiff) == "test.yaml:5: surface.stiffness: must be > 0 (got -5)");

  const std::string unknown = std::string(kMinimal) + "policy:\n  gain: 3\n";
  CHECK(error_of(unknown) == "test.yaml:9: policy.gain: unknown key");

  const std::string section = std::string(kMinimal) + "extras:\n  a: 1\n";
  CHECK(error_of(section) == "test.yaml:8: extras: unknown section");

  std::string no_duration = kMinimal;
  no_duration.replace(no_duration.find("  duration: 1.5\n"), 16, "  dt: 0.001\n");
  CHECK(error_of(no_duration).find("run.duration: missing required key") != std::string::npos);

  std::string no_radius = kMinimal;
  no_radius.replace(no_radius.find("  radius: 0.1\n"), 14, "");
  CHECK(error_of(no_radius).find("surface.radius: missing required key") != std::string::npos);

  const std::string bad_vec = std::string(kMinimal) + "policy:\n  B_d: [1, 2]\n";
  CHECK(error_of(bad_vec).find("policy.B_d: expected a list of 6 numbers") != std::string::npos);

  const std::string bad_kind = std::string(kMinimal) + "plant:\n  kind: torque\n";
  CHECK(error_of(bad_kind).find("plant.kind") != std::string::npos);

  CHECK(error_of("just text").find("document must be a mapping") != std::string::npos);
  CHECK(error_of("a: [1,").find("test.yaml") == 0);

  const std::string alpha = std::string(kMinimal) + "policy:\n  alpha: 1.5\n";
  CHECK(error_of(alpha) == "test.yaml:9: policy.alpha: must lie in [0, 1] (got 1.5)");
  const Scenario lax = parse_scenario(alpha, "test.yaml", {}, RangeChecks::kSkip);
  CHECK(lax.policy.alpha == 1.5);
  CHECK_FALSE(lax.violations().empty());
}

TEST_CASE("overrides") {
  const ScenarioOverride k[] = {{"surface.stiffness", "9000"}, {"policy.B_d", "[1,2,3,4,5,6]"}};
  const Scenario sc = parse_scenario(kMinimal, "test.yaml", k);
  CHECK(sc.surface.stiffness == 9000.0);
  CHECK(sc.policy.B_d == (Vec6() << 1, 2, 3, 4, 5, 6).finished());

  const ScenarioOverride bad_key[] = {{"stiffness", "1"}};
  CHECK(error_of(kMinimal, bad_key).find("override key must be") != std::string::npos);
  const ScenarioOverride unknown[] = {{"surface.hardness", "1"}};
  CHECK(error_of(kMinimal, unknown).find("surface.hardness: unknown key") != std::string::npos);
  const ScenarioOverride negative[] = {{"surface.stiffness", "-3"}};
  CHECK(error_of(kMinimal, negative).find("surface.stiffness") != std::string::npos);
}

TEST_CASE("serialize and parse round trip") {
  for (auto name : builtin_scenario_names()) {
    CAPTURE(name);
    const Scenario sc = *builtin_scenario(name);
    const std::string text = serialize_scenario(sc);
    const Scenario back = parse_scenario(text);
    CHECK(back == sc);
    CHECK(serialize_scenario(back) == text);
  }
  Scenario odd = plane_align_scenario();
  odd.surface = SurfaceModel::cylinder(Vec3(0.1, 0.2, 0.3), Vec3(1.0, 2.0, 2.0) / 3.0, 0.05, 1234.5);
  odd.plant.response = VelocityModeConfig::Response::kIdeal;
  odd.setpoints.vdot_d << 0.1, 0.2, 0.3, 0.4, 0.5, 1.0 / 3.0;
  odd.run.seed = 18446744073709551615ull;
  CHECK(parse_scenario(serialize_scenario(odd)) == odd);
}

TEST_CASE("bundled scenario files match the built-in definitions") {
  const std::filesystem::path dir(GRASP_SCENARIO_DIR);
  CHECK(load_scenario(dir / "plane_align.yaml") == plane_align_scenario());
  CHECK(load_scenario(dir / "tilted_slide.yaml") == tilted_slide_scenario());
  CHECK(load_scenario(dir / "sphere_slide.yaml") == sphere_slide_scenario());
  CHECK(load_scenario(dir / "bottle_approach.yaml") == bottle_approach_scenario());
  CHECK_THROWS_AS(load_scenario(dir / "missing.yaml"), ScenarioError);
}

TEST_CASE("trace csv format") {
  Scenario sc = plane_align_scenario();
  sc.run.duration = 0.01;
  const auto r = run(sc);
  const std::string csv = trace_csv(r.trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 22);
    CHECK(line.find('\r') == std::string::npos);
  }
  CHECK(rows == r.trace.size());
  CHECK(csv.back() == '\n');
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(-123456789012.0) == "-1.23456789e+11");
  CHECK(format_number(5e-4) == "0.0005");
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "grasp_io_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "out.txt";
  write_file_atomic(file, "first\n");
  write_file_atomic(file, "second\n");
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
