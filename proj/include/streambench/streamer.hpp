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
#pragma once

#include <cstdint>

#include "streambench/core.hpp"
#include "streambench/forecast.hpp"
#include "streambench/profiles.hpp"
#include "streambench/simulator.hpp"

namespace streambench {

// Forecasts are emitted this long (seconds) before each query instant so a
// strict-before pairing selects them.
inline constexpr double kForecastLead = 1e-6;

struct StreamerOptions {
  SimulationOptions simulation;
  ForecastConfig forecast;
};

// Default detector policy for a compute model: shrinking-tail on a single
// device, idle-free otherwise.
Policy default_policy(ComputeKind compute);

// Wraps a detector into a streaming system. Detector jobs are simulated
// first; each result is associated into the tracks as soon as it (plus any
// association cost) is available, and a forecast for every query t_i + eta
// is emitted kForecastLead before it. Forecast records carry the newest
// measurement frame they used as input_index. With ForecastMethod::kNone
// the result equals simulate().
SimulationResult run_streamer(const DetectionSet& detections, const ProfileSet& profiles,
                              const StreamerOptions& options,
                              const BenchmarkConfig& config, std::uint64_t seed);

}  // namespace streambench
