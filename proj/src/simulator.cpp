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
#include "streambench/simulator.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <tuple>

#include "streambench/error.hpp"
#include "streambench/forecast.hpp"

namespace streambench {

std::string_view to_string(ComputeKind kind) {
  return kind == ComputeKind::kSingleDevice ? "single" : "infinite";
}

ComputeKind parse_compute_kind(std::string_view text) {
  if (text == "single") return ComputeKind::kSingleDevice;
  if (text == "infinite") return ComputeKind::kInfiniteDevice;
  throw ConfigError("unknown compute model '" + std::string(text) + "'");
}

std::map<std::string, int> ScheduleTrace::block_counts() const {
  std::map<std::string, int> counts;
  for (const auto& b : blocks) ++counts[b.module];
  return counts;
}

int max_concurrency(std::span<const ExecutionBlock> blocks) {
  // (time, delta); ends sort before starts at equal times.
  std::vector<std::pair<double, int>> edges;
  for (const auto& b : blocks) {
    if (!b.on_accelerator()) continue;
    edges.emplace_back(b.start, +1);
    edges.emplace_back(b.end, -1);
  }
  std::sort(edges.begin(), edges.end());
  int open = 0;
  int peak = 0;
  for (const auto& [t, d] : edges) {
    open += d;
    peak = std::max(peak, open);
  }
  return peak;
}

namespace {

enum class EventKind { kArrival = 0, kCompletion = 1, kWaitExpiry = 2 };

struct Event {
  double time;  // frame units
  EventKind kind;
  std::uint64_t seq;
  int payload;  // frame for arrivals, job slot for completions

  auto key() const { return std::tuple(time, static_cast<int>(kind), seq); }
  bool operator>(const Event& other) const { return key() > other.key(); }
};

struct Job {
  int frame;
  bool detector;
  double start;  // frame units
  double end;
  Frame prediction;
};

class Simulation {
 public:
  Simulation(const DetectionSet& detections, const ProfileSet& profiles,
             const SimulationOptions& options, const BenchmarkConfig& config,
             std::uint64_t seed)
      : detections_(detections),
        options_(options),
        config_(config),
        rng_(seed),
        detector_(&profiles.at(kDetectorModule)),
        estimator_(options.policy, detector_->mean() / config.frame_interval) {
    if (options.policy.type == PolicyType::kFixedStride && options.policy.stride > 1) {
      tracker_ = &profiles.at(kTrackerModule);
    }
  }

  SimulationResult run() {
    for (int i = 1; i <= config_.num_frames; ++i) {
      push(static_cast<double>(i - 1), EventKind::kArrival, i);
    }
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::kArrival:
          on_arrival(ev.payload);
          break;
        case EventKind::kCompletion:
          on_completion(ev.payload);
          break;
        case EventKind::kWaitExpiry:
          waiting_ = false;
          dispatch();
          break;
      }
    }
    assign_devices();
    result_.trace.max_concurrency = max_concurrency(result_.trace.blocks);
    return std::move(result_);
  }

 private:
  bool single() const { return options_.compute == ComputeKind::kSingleDevice; }

  void push(double time, EventKind kind, int payload) {
    queue_.push(Event{time, kind, seq_++, payload});
  }

  void on_arrival(int frame) {
    latest_available_ = frame;
    if (!single()) {
      const bool detector = options_.policy.type != PolicyType::kFixedStride ||
                            (frame - 1) % options_.policy.stride == 0;
      launch(frame, detector);
      return;
    }
    if (!busy_ && !waiting_) dispatch();
  }

  void on_completion(int slot) {
    Job& job = jobs_[static_cast<std::size_t>(slot)];
    OutputRecord rec;
    rec.prediction = std::move(job.prediction);
    rec.timestamp = config_.to_seconds(job.end);
    rec.input_index = job.frame;
    rec.producer = job.detector ? Producer::kDetector : Producer::kTracker;
    last_output_ = rec.prediction;
    result_.outputs.records.push_back(std::move(rec));
    if (job.detector) estimator_.observe(job.end - job.start);
    if (single()) {
      busy_ = false;
      dispatch();
    }
  }

  void dispatch() {
    ScheduleState state;
    state.now = now_;
    state.latest_available = latest_available_;
    state.last_processed = last_processed_;
    state.last_detector_frame = last_detector_frame_;
    state.num_frames = config_.num_frames;
    const Action action = next_action(options_.policy, state, estimator_.estimate());
    if (const auto* p = std::get_if<ProcessFrame>(&action)) {
      launch(p->frame, p->detector);
      busy_ = true;
    } else if (const auto* w = std::get_if<WaitForArrival>(&action)) {
      waiting_ = true;
      push(w->until, EventKind::kWaitExpiry, 0);
    }
  }

  void launch(int frame, bool detector) {
    const RuntimeModel& model = detector ? *detector_ : *tracker_;
    const double runtime = config_.to_frames(sample_runtime(model, rng_));
    Job job;
    job.frame = frame;
    job.detector = detector;
    job.start = now_;
    job.end = snap_frames(now_ + runtime);
    job.prediction = detector ? detections_.frames[static_cast<std::size_t>(frame - 1)]
                              : tracker_output(frame);
    last_processed_ = std::max(last_processed_, frame);
    if (detector) last_detector_frame_ = frame;

    ExecutionBlock block;
    block.module = detector ? kDetectorModule : kTrackerModule;
    block.input_index = frame;
    block.start = config_.to_seconds(job.start);
    block.end = config_.to_seconds(job.end);
    result_.trace.blocks.push_back(std::move(block));

    push(job.end, EventKind::kCompletion, static_cast<int>(jobs_.size()));
    jobs_.push_back(std::move(job));
  }

  Frame tracker_output(int frame) {
    if (options_.tracker == TrackerFidelity::kHoldLast) return last_output_;
    Frame boxes = detections_.frames[static_cast<std::size_t>(frame - 1)];
    const Matching m = associate_greedy(last_output_, boxes, options_.tracker_min_iou);
    for (const auto& [p, n] : m.pairs) {
      if (last_output_[p].track_id) boxes[n].track_id = last_output_[p].track_id;
    }
    return boxes;
  }

  // Greedy interval coloring in launch order; blocks that touch do not
  // share an instant, so a device freed at t can start a job at t.
  void assign_devices() {
    auto& blocks = result_.trace.blocks;
    if (single()) {
      for (auto& b : blocks) b.device_id = 0;
      return;
    }
    std::vector<std::size_t> order(blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return blocks[a].start < blocks[b].start;
    });
    std::vector<double> busy_until;
    for (std::size_t idx : order) {
      auto& b = blocks[idx];
      int device = -1;
      for (std::size_t d = 0; d < busy_until.size(); ++d) {
        if (busy_until[d] <= b.start) {
          device = static_cast<int>(d);
          break;
        }
      }
      if (device < 0) {
        device = static_cast<int>(busy_until.size());
        busy_until.push_back(0.0);
      }
      busy_until[static_cast<std::size_t>(device)] = b.end;
      b.device_id = device;
    }
  }

  const DetectionSet& detections_;
  const SimulationOptions& options_;
  const BenchmarkConfig& config_;
  Rng rng_;
  const RuntimeModel* detector_;
  const RuntimeModel* tracker_ = nullptr;
  RuntimeEstimator estimator_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  int latest_available_ = 0;
  int last_processed_ = 0;
  int last_detector_frame_ = 0;
  bool busy_ = false;
  bool waiting_ = false;
  Frame last_output_;
  std::vector<Job> jobs_;
  SimulationResult result_;
};

}  // namespace

SimulationResult simulate(const DetectionSet& detections, const ProfileSet& profiles,
                          const SimulationOptions& options,
                          const BenchmarkConfig& config, std::uint64_t seed) {
  config.validate();
  options.policy.validate();
  if (detections.frames.size() != static_cast<std::size_t>(config.num_frames)) {
    throw InputError("detection set has " + std::to_string(detections.frames.size()) +
                     " frames, benchmark has " + std::to_string(config.num_frames));
  }
  return Simulation(detections, profiles, options, config, seed).run();
}

}  // namespace streambench
