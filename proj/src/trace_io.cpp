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

#include "grasp/trace_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace grasp {
namespace {

void append(std::string& out, double v) {
  out += format_number(v);
}

std::string settling(const std::optional<double>& t) {
  return t ? format_number(*t) : std::string("not_settled");
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 9);
  if (res.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), res.ptr);
}

std::string trace_csv(std::span<const TraceRecord> trace) {
  std::string out = kTraceHeader;
  out += '\n';
  out.reserve(out.size() + trace.size() * 260);
  for (const TraceRecord& r : trace) {
    const auto& q = r.pose.orientation;
    const double row[] = {r.t,
                          r.pose.position.x(), r.pose.position.y(), r.pose.position.z(),
                          q.w(), q.x(), q.y(), q.z(),
                          r.twist.linear.x(), r.twist.linear.y(), r.twist.linear.z(),
                          r.twist.angular.x(), r.twist.angular.y(), r.twist.angular.z(),
                          r.measured.force.x(), r.measured.force.y(), r.measured.force.z(),
                          r.measured.moment.x(), r.measured.moment.y(), r.measured.moment.z(),
                          r.gate};
    for (double v : row) {
      append(out, v);
      out += ',';
    }
    out += r.contact ? '1' : '0';
    out += ',';
    append(out, r.alignment_angle);
    out += '\n';
  }
  return out;
}

std::string metrics_text(const Metrics& m) {
  std::string out;
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("final_alignment_angle", format_number(m.final_alignment_angle));
  line("steady_force_error", format_number(m.steady_force_error));
  line("velocity_settling_time", settling(m.velocity_settling));
  line("force_settling_time", settling(m.force_settling));
  line("alignment_settling_time", settling(m.alignment_settling));
  line("alignment_settled", m.alignment_settling ? "true" : "false");
  line("max_penetration", format_number(m.max_penetration));
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace grasp
