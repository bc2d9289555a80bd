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
#include <vector>

#include "streambench/core.hpp"
#include "streambench/evalmetrics.hpp"
#include "streambench/profiles.hpp"
#include "streambench/simulator.hpp"
#include "streambench/streamer.hpp"

namespace streambench {

// Everything needed to run one streaming benchmark end to end.
struct BenchmarkSetup {
  GroundTruthStream gt;
  DetectionSet detections;
  ProfileSet profiles;
  StreamerOptions options;
};

struct BenchmarkRun {
  SimulationResult simulation;
  EvalReport report;
};

BenchmarkRun run_benchmark(const BenchmarkSetup& setup, std::uint64_t seed);

struct VarianceEstimate {
  std::vector<double> ap;  // one streaming AP per seed
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double relative_std = 0.0;
};

// Streaming AP over seeds base_seed, base_seed + 1, ... Throws
// ContractError for fewer than two seeds.
VarianceEstimate estimate_variance(const BenchmarkSetup& setup, int num_seeds,
                                   std::uint64_t base_seed);

}  // namespace streambench
