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
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "streambench/error.hpp"
#include "streambench/simulator.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace streambench;
using streambench::testing::constant_detector;
using streambench::testing::frame_config;
using streambench::testing::moving_frames;

namespace {

constexpr double kFi = 1.0 / 30.0;

DetectionSet detections(int n) { return DetectionSet{moving_frames(n)}; }

SimulationResult run(const ProfileSet& p, Policy policy, ComputeKind compute, int n,
                     std::uint64_t seed = 0, double fi = kFi) {
  SimulationOptions o;
  o.policy = policy;
  o.compute = compute;
  return simulate(detections(n), p, o, frame_config(n, fi), seed);
}

std::vector<std::pair<double, double>> intervals(const ScheduleTrace& t) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& b : t.blocks) {
    if (b.on_accelerator()) iv.emplace_back(b.start, b.end);
  }
  return iv;
}

// Conservation, causality and (single device) non-overlap.
void check_trace_invariants(const SimulationResult& r, const DetectionSet& d, double fi,
                            bool single) {
  std::vector<const ExecutionBlock*> acc;
  for (const auto& b : r.trace.blocks) {
    REQUIRE(b.end > b.start);
    if (!b.on_accelerator()) continue;
    acc.push_back(&b);
    const double arrival = (b.input_index - 1) * fi;
    REQUIRE(b.start >= arrival - 1e-12);
    REQUIRE(b.input_index <= static_cast<int>(std::floor(b.start / fi + 1e-9)) + 1);
  }
  REQUIRE(acc.size() == r.outputs.size());
  std::sort(acc.begin(), acc.end(), [](auto* a, auto* b) { return a->end < b->end; });
  for (std::size_t j = 0; j < acc.size(); ++j) {
    const auto& rec = r.outputs.records[j];
    REQUIRE(rec.timestamp == acc[j]->end);
    REQUIRE(rec.input_index == acc[j]->input_index);
    if (rec.producer == Producer::kDetector) {
      REQUIRE(rec.prediction == d.frames[rec.input_index - 1]);
    }
  }
  REQUIRE(r.outputs.is_sorted());
  if (single) {
    auto sorted = acc;
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->start < b->start; });
    for (std::size_t j = 1; j < sorted.size(); ++j) {
      REQUIRE(sorted[j - 1]->end <= sorted[j]->start + 1e-12);
    }
    REQUIRE(r.trace.max_concurrency == 1);
  }
}

}  // namespace

TEST_CASE("infinite device with a 2.78-frame runtime peaks at 3 jobs") {
  const auto r = run(constant_detector(2.78, kFi), Policy::idle_free(),
                     ComputeKind::kInfiniteDevice, 100);
  CHECK(r.trace.blocks.size() == 100);
  CHECK(r.trace.max_concurrency == 3);
  CHECK(oracle::brute_force_overlap(intervals(r.trace)) == 3);
  int devices = 0;
  for (const auto& b : r.trace.blocks) devices = std::max(devices, b.device_id + 1);
  CHECK(devices == 3);
}

TEST_CASE("infinite device concurrency equals ceil(r) for constant runtimes") {
  for (double rf : {0.4, 1.2, 1.9, 2.5, 3.3, 4.7, 6.01}) {
    CAPTURE(rf);
    const auto r = run(constant_detector(rf, kFi), Policy::idle_free(),
                       ComputeKind::kInfiniteDevice, 60);
    CHECK(r.trace.max_concurrency == static_cast<int>(std::ceil(rf)));
    CHECK(oracle::brute_force_overlap(intervals(r.trace)) == r.trace.max_concurrency);
  }
}

TEST_CASE("infinite device with bounded runtimes stays within ceil(b)") {
  ProfileSet p;
  p.set(kDetectorModule, RuntimeModel::uniform(2.0 * kFi, 3.4 * kFi));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = run(p, Policy::idle_free(), ComputeKind::kInfiniteDevice, 100, seed);
    CHECK(r.trace.max_concurrency <= 4);
    CHECK(r.trace.max_concurrency == oracle::brute_force_overlap(intervals(r.trace)));
    check_trace_invariants(r, detections(100), kFi, false);
  }
}

TEST_CASE("sub-frame detector outputs every frame") {
  const auto r = run(constant_detector(0.5, kFi), Policy::idle_free(),
                     ComputeKind::kSingleDevice, 20);
  REQUIRE(r.outputs.size() == 20);
  for (int i = 1; i <= 20; ++i) {
    CHECK(r.outputs.records[i - 1].input_index == i);
    CHECK(r.outputs.records[i - 1].timestamp == doctest::Approx((i - 1 + 0.5) * kFi));
  }
}

TEST_CASE("3-frame idle-free detector processes every third frame") {
  const auto r = run(constant_detector(3.0, 1.0), Policy::idle_free(),
                     ComputeKind::kSingleDevice, 12, 0, 1.0);
  // Frames 1, 4, 7, 10, then the last frame 12 (arrived at 11) at 12.
  REQUIRE(r.outputs.size() == 5);
  for (int j = 0; j < 4; ++j) {
    CHECK(r.outputs.records[j].timestamp == doctest::Approx(3.0 * (j + 1)));
    CHECK(r.outputs.records[j].input_index == 3 * j + 1);
  }
  CHECK(r.outputs.records[4].input_index == 12);
  CHECK(r.outputs.records[4].timestamp == doctest::Approx(15.0));
}

TEST_CASE("single-device timelines match the exact-arithmetic oracle") {
  for (int tenths = 11; tenths <= 49; tenths += 2) {
    for (bool dynamic : {false, true}) {
      CAPTURE(tenths);
      CAPTURE(dynamic);
      const int n = 200;
      const auto r = run(constant_detector(tenths / 10.0, kFi),
                         dynamic ? Policy::shrinking_tail() : Policy::idle_free(),
                         ComputeKind::kSingleDevice, n);
      const auto want = oracle::timeline(tenths, 10, n, dynamic);
      REQUIRE(r.trace.blocks.size() == want.size());
      for (std::size_t j = 0; j < want.size(); ++j) {
        const auto& b = r.trace.blocks[j];
        REQUIRE(b.input_index == want[j].input + 1);
        REQUIRE(b.start / kFi == doctest::Approx(want[j].start / 10.0));
        REQUIRE(b.end / kFi == doctest::Approx(want[j].end / 10.0));
      }
    }
  }
}

TEST_CASE("shrinking-tail traces contain no shrinking-tail blocks") {
  for (int tenths = 11; tenths <= 60; ++tenths) {
    const auto r = run(constant_detector(tenths / 10.0, kFi), Policy::shrinking_tail(),
                       ComputeKind::kSingleDevice, 300);
    for (const auto& b : r.trace.blocks) {
      REQUIRE(classify_block(b.start / kFi, b.end / kFi) == BlockKind::kNonShrinking);
    }
  }
}

TEST_CASE("sub-frame runtimes process every frame with mismatch 1") {
  for (double rf : {0.3, 0.75, 1.0}) {
    for (Policy p : {Policy::idle_free(), Policy::shrinking_tail()}) {
      const auto r = run(constant_detector(rf, kFi), p, ComputeKind::kSingleDevice, 50);
      REQUIRE(r.outputs.size() == 50);
      const MismatchSeries m = temporal_mismatch(r.outputs, frame_config(50, kFi));
      CHECK(m.mean_answered == doctest::Approx(1.0));
      CHECK(m.unanswered == 1);
    }
  }
}

TEST_CASE("faster profiles never increase shrinking-tail mismatch") {
  for (int tenths = 11; tenths <= 60; ++tenths) {
    CAPTURE(tenths);
    const double rf = tenths / 10.0;
    const auto slow = run(constant_detector(rf, kFi), Policy::shrinking_tail(),
                          ComputeKind::kSingleDevice, 300);
    auto p = constant_detector(rf, kFi);
    p.scale(kDetectorModule, 0.86);
    const auto fast = run(p, Policy::shrinking_tail(), ComputeKind::kSingleDevice, 300);
    const auto c = frame_config(300, kFi);
    CHECK(temporal_mismatch(fast.outputs, c).mean <= temporal_mismatch(slow.outputs, c).mean);
  }
}

TEST_CASE("idle-free mismatch is not monotone in the runtime") {
  // 1.5 frames starts every other job on a frame boundary; 1.29 frames
  // drifts and answers later on average.
  const int n = 200;
  const auto c = frame_config(n, kFi);
  const double slow = temporal_mismatch(
      run(constant_detector(1.5, kFi), Policy::idle_free(), ComputeKind::kSingleDevice, n).outputs,
      c).mean;
  const double fast = temporal_mismatch(
      run(constant_detector(1.29, kFi), Policy::idle_free(), ComputeKind::kSingleDevice, n).outputs,
      c).mean;
  CHECK(slow == doctest::Approx(oracle::timeline_mean_mismatch(oracle::timeline(150, 100, n, false), 100, n)));
  CHECK(fast == doctest::Approx(oracle::timeline_mean_mismatch(oracle::timeline(129, 100, n, false), 100, n)));
  CHECK(fast > slow);
}

TEST_CASE("fixed stride launches ceil(T / s) detector jobs") {
  for (int stride : {1, 2, 3, 5, 7}) {
    for (int n : {10, 31, 100}) {
      ProfileSet p = constant_detector(0.8, kFi);
      p.set(kTrackerModule, RuntimeModel::constant(0.3 * kFi));
      const auto r = run(p, Policy::fixed_stride(stride), ComputeKind::kSingleDevice, n);
      CHECK(r.trace.block_counts()[kDetectorModule] == (n + stride - 1) / stride);
      check_trace_invariants(r, detections(n), kFi, true);
    }
  }
}

TEST_CASE("fixed stride carries track ids through the tracker") {
  ProfileSet p = constant_detector(0.5, kFi);
  p.set(kTrackerModule, RuntimeModel::constant(0.2 * kFi));
  // Only the detector frames 1, 5, 9 carry ids in the raw detections.
  DetectionSet d = detections(12);
  for (int f : {1, 5, 9}) d.frames[f - 1][0].track_id = 7;
  SimulationOptions o;
  o.policy = Policy::fixed_stride(4);
  const auto r = simulate(d, p, o, frame_config(12, kFi), 0);
  REQUIRE(r.outputs.size() == 12);
  for (const auto& rec : r.outputs.records) {
    CAPTURE(rec.input_index);
    REQUIRE(rec.prediction.size() == 1);
    CHECK(rec.prediction[0].track_id == std::optional<std::int64_t>(7));
    CHECK(rec.prediction[0].x == rec.input_index - 1);
  }
}

TEST_CASE("hold-last tracker repeats the previous output") {
  ProfileSet p = constant_detector(0.5, kFi);
  p.set(kTrackerModule, RuntimeModel::constant(0.2 * kFi));
  SimulationOptions o;
  o.policy = Policy::fixed_stride(3);
  o.tracker = TrackerFidelity::kHoldLast;
  const auto r = simulate(detections(9), p, o, frame_config(9, kFi), 0);
  for (std::size_t j = 1; j < r.outputs.size(); ++j) {
    const auto& rec = r.outputs.records[j];
    if (rec.producer == Producer::kTracker) {
      CHECK(rec.prediction == r.outputs.records[j - 1].prediction);
    }
  }
}

TEST_CASE("stochastic single-device runs keep the invariants") {
  ProfileSet p;
  p.set(kDetectorModule,
        RuntimeModel::empirical(RuntimeProfile(kDetectorModule, {0.04, 0.07, 0.09, 0.15})));
  p.set(kTrackerModule, RuntimeModel::uniform(0.005, 0.02));
  for (Policy policy : {Policy::idle_free(), Policy::shrinking_tail(), Policy::fixed_stride(3)}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = run(p, policy, ComputeKind::kSingleDevice, 120, seed);
      check_trace_invariants(r, detections(120), kFi, true);
    }
  }
  Policy ema = Policy::shrinking_tail();
  ema.estimate = EstimateMode::kEma;
  const auto r = run(p, ema, ComputeKind::kSingleDevice, 120, 3);
  check_trace_invariants(r, detections(120), kFi, true);
}

TEST_CASE("simulation is deterministic per seed") {
  ProfileSet p;
  p.set(kDetectorModule, RuntimeModel::uniform(0.05, 0.12));
  const auto a = run(p, Policy::shrinking_tail(), ComputeKind::kSingleDevice, 100, 42);
  const auto b = run(p, Policy::shrinking_tail(), ComputeKind::kSingleDevice, 100, 42);
  CHECK(a.outputs == b.outputs);
  REQUIRE(a.trace.blocks.size() == b.trace.blocks.size());
  for (std::size_t j = 0; j < a.trace.blocks.size(); ++j) {
    CHECK(a.trace.blocks[j].start == b.trace.blocks[j].start);
    CHECK(a.trace.blocks[j].end == b.trace.blocks[j].end);
  }
  const auto c = run(p, Policy::shrinking_tail(), ComputeKind::kSingleDevice, 100, 43);
  CHECK_FALSE(a.outputs == c.outputs);
}

TEST_CASE("input and configuration errors") {
  SimulationOptions o;
  CHECK_THROWS_AS(simulate(detections(5), ProfileSet{}, o, frame_config(5, kFi), 0),
                  ConfigError);
  CHECK_THROWS_AS(simulate(detections(4), constant_detector(1.5, kFi), o, frame_config(5, kFi), 0),
                  InputError);
  o.policy = Policy::fixed_stride(2);
  CHECK_THROWS_AS(simulate(detections(5), constant_detector(1.5, kFi), o, frame_config(5, kFi), 0),
                  ConfigError);
}

TEST_CASE("max_concurrency counts half-open accelerator intervals") {
  std::vector<ExecutionBlock> blocks = {
      {kDetectorModule, 1, 0.0, 1.0, 0},
      {kDetectorModule, 2, 1.0, 2.0, 0},
      {kAssociationModule, 1, 0.5, 1.5, kCpuDevice},
  };
  CHECK(max_concurrency(blocks) == 1);
  blocks.push_back({kDetectorModule, 3, 0.9, 1.1, 1});
  CHECK(max_concurrency(blocks) == 2);
  CHECK(max_concurrency(std::vector<ExecutionBlock>{}) == 0);
}

TEST_CASE("compute kind names") {
  CHECK(parse_compute_kind("single") == ComputeKind::kSingleDevice);
  CHECK(parse_compute_kind("infinite") == ComputeKind::kInfiniteDevice);
  CHECK_THROWS_AS(parse_compute_kind("quantum"), ConfigError);
}
