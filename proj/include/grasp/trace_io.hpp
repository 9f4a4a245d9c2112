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

#ifndef GRASP_TRACE_IO_HPP_
#define GRASP_TRACE_IO_HPP_

#include <filesystem>
#include <span>
#include <string>

#include "grasp/simulator.hpp"

namespace grasp {

inline constexpr const char* kTraceHeader =
    "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,fx,fy,fz,mx,my,mz,gate,contact,align_angle";

// 9 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double value);

// Header plus one '\n'-terminated row per record.
std::string trace_csv(std::span<const TraceRecord> trace);

// "key = value" lines; unsettled times print as "not_settled".
std::string metrics_text(const Metrics& metrics);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace grasp

#endif  // GRASP_TRACE_IO_HPP_
