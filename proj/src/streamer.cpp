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
#include "streambench/streamer.hpp"

#include <algorithm>

namespace streambench {

namespace {

// Separate stream for CPU-side modules so their costs never perturb the
// detector's runtime draws.
constexpr std::uint64_t kCpuStreamSalt = 0x9e3779b97f4a7c15ULL;

struct Measurement {
  double available;  // seconds
  std::size_t record;
};

}  // namespace

Policy default_policy(ComputeKind compute) {
  return compute == ComputeKind::kSingleDevice ? Policy::shrinking_tail()
                                               : Policy::idle_free();
}

SimulationResult run_streamer(const DetectionSet& detections, const ProfileSet& profiles,
                              const StreamerOptions& options,
                              const BenchmarkConfig& config, std::uint64_t seed) {
  SimulationResult sim =
      simulate(detections, profiles, options.simulation, config, seed);
  if (options.forecast.method == ForecastMethod::kNone) return sim;

  Rng cpu_rng(seed ^ kCpuStreamSalt);
  const RuntimeModel* association = profiles.find(kAssociationModule);
  const RuntimeModel* forecasting = profiles.find(kForecastModule);

  const auto& records = sim.outputs.records;
  std::vector<Measurement> measurements;
  measurements.reserve(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) {
    double available = records[j].timestamp;
    if (association) {
      const double cost = sample_runtime(*association, cpu_rng);
      sim.trace.blocks.push_back({kAssociationModule, records[j].input_index,
                                  available, available + cost, kCpuDevice});
      available += cost;
    }
    measurements.push_back({available, j});
  }
  std::stable_sort(measurements.begin(), measurements.end(),
                   [](const Measurement& a, const Measurement& b) {
                     return a.available < b.available;
                   });

  Forecaster forecaster(options.forecast, config.frame_interval);
  OutputStream out;
  out.records.reserve(static_cast<std::size_t>(config.num_frames));
  std::size_t next = 0;
  int newest_input = 0;
  for (int i = 1; i <= config.num_frames; ++i) {
    const double query = config.query_time(i);
    const double emit = query - kForecastLead;
    double start = emit;
    double cost = 0.0;
    if (forecasting) {
      cost = sample_runtime(*forecasting, cpu_rng);
      start = emit - cost;
    }
    while (next < measurements.size() && measurements[next].available <= start) {
      const OutputRecord& r = records[measurements[next].record];
      if (forecaster.observe(r.prediction, config.frame_time(r.input_index))) {
        newest_input = std::max(newest_input, r.input_index);
      }
      ++next;
    }
    if (!forecaster.has_observation()) continue;
    if (forecasting) {
      sim.trace.blocks.push_back({kForecastModule, newest_input, start, emit, kCpuDevice});
    }
    OutputRecord rec;
    rec.prediction = forecaster.forecast(query);
    rec.timestamp = emit;
    rec.input_index = newest_input;
    rec.producer = Producer::kForecaster;
    out.records.push_back(std::move(rec));
  }
  sim.outputs = std::move(out);
  return sim;
}

}  // namespace streambench
