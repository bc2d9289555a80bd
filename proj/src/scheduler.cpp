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
#include "streambench/scheduler.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "streambench/core.hpp"
#include "streambench/error.hpp"

namespace streambench {

void Policy::validate() const {
  if (type == PolicyType::kFixedStride && stride < 1) {
    throw ConfigError("stride must be >= 1, got " + std::to_string(stride));
  }
  if (estimate == EstimateMode::kEma && !(ema_alpha > 0.0 && ema_alpha <= 1.0)) {
    throw ConfigError("EMA alpha must lie in (0, 1]");
  }
}

std::string Policy::describe() const {
  std::string name;
  switch (type) {
    case PolicyType::kIdleFree:
      name = "idlefree";
      break;
    case PolicyType::kShrinkingTail:
      name = "shrinking-tail";
      break;
    case PolicyType::kFixedStride:
      name = "stride:" + std::to_string(stride);
      break;
  }
  if (estimate == EstimateMode::kEma) {
    name += "/ema:" + std::to_string(ema_alpha);
  }
  return name;
}

Policy parse_policy(std::string_view text) {
  if (text == "idlefree" || text == "idle-free") return Policy::idle_free();
  if (text == "shrinking-tail" || text == "dynamic") return Policy::shrinking_tail();
  if (text.starts_with("stride:")) {
    const auto digits = text.substr(7);
    int stride = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), stride);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || stride < 1) {
      throw ConfigError("invalid stride in policy '" + std::string(text) + "'");
    }
    return Policy::fixed_stride(stride);
  }
  throw ConfigError("unknown policy '" + std::string(text) + "'");
}

void parse_runtime_estimate(std::string_view text, Policy& policy) {
  if (text == "mean") {
    policy.estimate = EstimateMode::kKnownMean;
    return;
  }
  if (text.starts_with("ema:")) {
    const std::string value(text.substr(4));
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw ConfigError("invalid EMA alpha in '" + std::string(text) + "'");
    }
    policy.estimate = EstimateMode::kEma;
    policy.ema_alpha = alpha;
    policy.validate();
    return;
  }
  throw ConfigError("unknown runtime estimate '" + std::string(text) + "'");
}

double tail(double t) {
  const double snapped = snap_frames(t);
  return snapped - std::floor(snapped);
}

bool should_wait(double finish_time, double runtime) {
  if (!(runtime > 1.0)) return false;
  return tail(finish_time + runtime) < tail(finish_time);
}

BlockKind classify_block(double start, double end) {
  return tail(start) > tail(end) ? BlockKind::kShrinkingTail : BlockKind::kNonShrinking;
}

namespace {

Action wait_or_terminate(const ScheduleState& s) {
  if (s.latest_available >= s.num_frames) return Terminate{};
  // Frame latest_available + 1 arrives at time latest_available.
  return WaitForArrival{static_cast<double>(s.latest_available)};
}

}  // namespace

Action next_action(const Policy& policy, const ScheduleState& s,
                   double runtime_estimate) {
  const int latest = s.latest_available;
  switch (policy.type) {
    case PolicyType::kIdleFree:
      if (latest > s.last_processed) return ProcessFrame{latest, s.now, true};
      return wait_or_terminate(s);

    case PolicyType::kShrinkingTail:
      if (latest >= s.num_frames && s.last_processed >= s.num_frames) return Terminate{};
      // The rule also applies to the last frame, where the wait runs to the
      // instant the next frame would have arrived.
      if (should_wait(s.now, runtime_estimate)) {
        return WaitForArrival{floor_frames(s.now) + 1.0};
      }
      if (latest > s.last_processed) return ProcessFrame{latest, s.now, true};
      return wait_or_terminate(s);

    case PolicyType::kFixedStride: {
      // Detector frames 1, 1 + stride, ... are never skipped; the tracker
      // handles the newest frame in between.
      const int due = s.last_detector_frame == 0 ? 1 : s.last_detector_frame + policy.stride;
      if (due <= s.num_frames && due <= latest) return ProcessFrame{due, s.now, true};
      if (latest > s.last_processed) return ProcessFrame{latest, s.now, false};
      if (due > s.num_frames && latest >= s.num_frames) return Terminate{};
      return wait_or_terminate(s);
    }
  }
  return Terminate{};
}

}  // namespace streambench
