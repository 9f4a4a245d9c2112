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


// grasp_sim: run bundled or file-based scenarios, sweep one parameter, or
// run the invariant suite.
//
//   grasp_sim run <scenario> --out <dir>
//   grasp_sim sweep <scenario> --param <section.field> --values v1,v2,... --out <dir>
//   grasp_sim validate [--scenario <file>] [--set section.field=value ...]
//
// <scenario> is a YAML file, or one of the bundled names when no such file
// exists. GRASP_SIM_JOBS caps the number of concurrent sweep runs.
//
// Exit codes: 0 success, 1 validation failure or I/O error, 2 bad arguments
// or configuration, 3 numerical abort.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "grasp/errors.hpp"
#include "grasp/scenario_io.hpp"
#include "grasp/scenarios.hpp"
#include "grasp/simulator.hpp"
#include "grasp/trace_io.hpp"
#include "grasp/validation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

grasp::Scenario load(const std::string& spec, const std::vector<grasp::ScenarioOverride>& overrides,
                     grasp::RangeChecks checks = grasp::RangeChecks::kEnforce) {
  if (!fs::exists(spec)) {
    if (auto builtin = grasp::builtin_scenario(spec)) {
      return grasp::parse_scenario(grasp::serialize_scenario(*builtin), spec, overrides, checks);
    }
  }
  return grasp::load_scenario(spec, overrides, checks);
}

void write_run(const fs::path& dir, const grasp::RunResult& result) {
  fs::create_directories(dir);
  grasp::write_file_atomic(dir / "trace.csv", grasp::trace_csv(result.trace));
  grasp::write_file_atomic(dir / "metrics.txt", grasp::metrics_text(result.metrics));
}

unsigned sweep_jobs() {
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRASP_SIM_JOBS")) {
    unsigned parsed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    if (ec == std::errc() && ptr == text.data() + text.size() && parsed > 0) jobs = parsed;
  }
  return jobs;
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    std::string item = list.substr(start, end - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

// Mean of a per-record quantity over the last 10% of the trace.
template <typename F>
double tail_mean(const std::vector<grasp::TraceRecord>& trace, F value) {
  const std::size_t n = trace.size();
  const std::size_t first = n - std::max<std::size_t>(1, n / 10);
  double sum = 0.0;
  for (std::size_t k = first; k < n; ++k) sum += value(trace[k]);
  return sum / static_cast<double>(n - first);
}

std::string optional_number(const std::optional<double>& v) {
  return v ? grasp::format_number(*v) : "not_settled";
}

int cmd_run(const std::string& scenario_spec, const fs::path& out) {
  const grasp::Scenario scenario = load(scenario_spec, {});
  write_run(out, grasp::run(scenario));
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_spec, const std::string& param, const std::string& values_text,
              const fs::path& out) {
  const auto values = split_values(values_text);
  if (values.empty()) {
    std::cerr << "grasp_sim sweep: --values lists no values\n";
    return kExitConfig;
  }
  const grasp::Scenario base = load(scenario_spec, {});
  std::vector<grasp::Scenario> runs;
  runs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::vector<grasp::ScenarioOverride> overrides{
        {param, values[i]},
        {"run.seed", std::to_string(grasp::mix_seed(base.run.seed, i))}};
    runs.push_back(load(scenario_spec, overrides));
  }
  const auto results = grasp::run_batch(runs, sweep_jobs());

  std::string summary =
      "index,value,seed,steady_force,steady_penetration,early_tangential_path,final_alignment_angle,"
      "velocity_settling_time,force_settling_time,alignment_settling_time,max_penetration\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    write_run(out / (param + "_" + std::to_string(i)), r);
    const double steady_force = tail_mean(r.trace, [](const auto& rec) { return rec.true_force; });
    const double steady_pen = tail_mean(r.trace, [](const auto& rec) { return rec.penetration; });
    const double early = grasp::integrated_tangential_speed(r.trace, 0.0, 1.0);
    summary += std::to_string(i) + "," + values[i] + "," + std::to_string(runs[i].run.seed) + "," +
               grasp::format_number(steady_force) + "," + grasp::format_number(steady_pen) + "," +
               grasp::format_number(early) + "," + grasp::format_number(r.metrics.final_alignment_angle) +
               "," + optional_number(r.metrics.velocity_settling) + "," +
               optional_number(r.metrics.force_settling) + "," +
               optional_number(r.metrics.alignment_settling) + "," +
               grasp::format_number(r.metrics.max_penetration) + "\n";
  }
  grasp::write_file_atomic(out / "summary.csv", summary);
  return kExitOk;
}

int cmd_validate(const std::optional<std::string>& scenario_spec, const std::vector<std::string>& sets) {
  std::vector<grasp::ScenarioOverride> overrides;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "grasp_sim validate: --set expects section.field=value, got '" << s << "'\n";
      return kExitConfig;
    }
    overrides.push_back({s.substr(0, eq), s.substr(eq + 1)});
  }
  grasp::ValidationOptions options;
  if (scenario_spec || !overrides.empty()) {
    const grasp::Scenario sc =
        load(scenario_spec.value_or("plane-align"), overrides, grasp::RangeChecks::kSkip);
    options.policy = sc.policy;
    options.config_violations = sc.violations();
  }
  const auto results = grasp::run_invariant_suite(options);
  std::cout << grasp::format_report(results);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  std::cout << (failed == 0 ? "all invariants passed" : std::to_string(failed) + " invariant(s) failed")
            << "\n";
  return failed == 0 ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grasp alignment admittance-policy simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write trace.csv and metrics.txt");
  run_cmd->add_option("scenario", scenario, "Scenario YAML file or bundled scenario name")->required();
  run_cmd->add_option("--out", out, "Output directory")->required();

  std::string param;
  std::string values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario per parameter value");
  sweep_cmd->add_option("scenario", scenario, "Scenario YAML file or bundled scenario name")->required();
  sweep_cmd->add_option("--param", param, "Parameter as section.field")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out, "Output directory")->required();

  std::optional<std::string> validate_scenario;
  std::vector<std::string> sets;
  auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite");
  validate_cmd->add_option("--scenario", validate_scenario, "Take policy parameters from this scenario");
  validate_cmd->add_option("--set", sets, "Override section.field=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(scenario, out);
    if (*sweep_cmd) return cmd_sweep(scenario, param, values, out);
    return cmd_validate(validate_scenario, sets);
  } catch (const grasp::ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const grasp::NonFiniteError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const grasp::ConvergenceError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const grasp::SingularityError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}
