// Copyright 2026 The StreamBench Authors. All Rights Reserved.
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
//
// Discrete-event simulation of a perception pipeline whose modules are
// characterized only by their per-frame outputs and runtime distributions.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streambench/core.hpp"
#include "streambench/profiles.hpp"
#include "streambench/scheduler.hpp"

namespace streambench {

enum class ComputeKind {
  kSingleDevice,    // one accelerator job at a time, scheduled by the policy
  kInfiniteDevice,  // a job for every frame at its arrival
};

std::string_view to_string(ComputeKind kind);
ComputeKind parse_compute_kind(std::string_view text);

// What a tracker job reports for its frame.
enum class TrackerFidelity {
  kIdeal,     // the frame's own boxes, track ids carried over by association
  kHoldLast,  // the previous output unchanged
};

inline constexpr int kCpuDevice = -1;

struct ExecutionBlock {
  std::string module;
  int input_index = 1;
  double start = 0.0;  // seconds
  double end = 0.0;
  int device_id = 0;  // kCpuDevice for zero-accelerator modules

  bool on_accelerator() const { return device_id != kCpuDevice; }
};

struct ScheduleTrace {
  std::vector<ExecutionBlock> blocks;
  int max_concurrency = 0;

  std::map<std::string, int> block_counts() const;
};

// Largest number of accelerator blocks open at one instant. Blocks are
// half-open, so one ending exactly when another starts does not overlap it.
int max_concurrency(std::span<const ExecutionBlock> blocks);

struct SimulationOptions {
  Policy policy = Policy::shrinking_tail();
  ComputeKind compute = ComputeKind::kSingleDevice;
  TrackerFidelity tracker = TrackerFidelity::kIdeal;
  double tracker_min_iou = 0.3;
};

struct SimulationResult {
  OutputStream outputs;
  ScheduleTrace trace;
};

// Runs the detector (and, for fixed-stride policies, the tracker) over
// config.num_frames frames. Deterministic for a given seed. Throws
// ConfigError for a missing profile and InputError when the detection set
// does not cover every frame.
SimulationResult simulate(const DetectionSet& detections, const ProfileSet& profiles,
                          const SimulationOptions& options,
                          const BenchmarkConfig& config, std::uint64_t seed);

}  // namespace streambench
