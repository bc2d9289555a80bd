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
#include "streambench/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "streambench/error.hpp"

namespace streambench {

BenchmarkRun run_benchmark(const BenchmarkSetup& setup, std::uint64_t seed) {
  setup.gt.validate();
  setup.detections.validate(setup.gt.config.num_frames, setup.gt.classes);
  BenchmarkRun run;
  run.simulation = run_streamer(setup.detections, setup.profiles, setup.options,
                                setup.gt.config, seed);
  run.report = evaluate_streaming(setup.gt, run.simulation.outputs);
  run.report.max_concurrency = run.simulation.trace.max_concurrency;
  return run;
}

VarianceEstimate estimate_variance(const BenchmarkSetup& setup, int num_seeds,
                                   std::uint64_t base_seed) {
  if (num_seeds < 2) throw ContractError("variance estimate needs at least two seeds");
  VarianceEstimate est;
  for (int s = 0; s < num_seeds; ++s) {
    const auto run = run_benchmark(setup, base_seed + static_cast<std::uint64_t>(s));
    est.ap.push_back(run.report.ap.ap.value_or(0.0));
  }
  const double n = static_cast<double>(est.ap.size());
  est.mean = std::accumulate(est.ap.begin(), est.ap.end(), 0.0) / n;
  if (std::adjacent_find(est.ap.begin(), est.ap.end(), std::not_equal_to<>()) ==
      est.ap.end()) {
    est.mean = est.ap.front();
    return est;
  }
  double ss = 0.0;
  for (double a : est.ap) ss += (a - est.mean) * (a - est.mean);
  est.std = std::sqrt(ss / (n - 1.0));
  est.relative_std = est.mean > 0.0 ? est.std / est.mean : 0.0;
  return est;
}

}  // namespace streambench
