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
// Frame-selection policies. Every function here reasons in frame units:
// frame i (1-based) arrives at time i - 1.
#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace streambench {

enum class PolicyType { kIdleFree, kShrinkingTail, kFixedStride };
enum class EstimateMode { kKnownMean, kEma };

struct Policy {
  PolicyType type = PolicyType::kShrinkingTail;
  int stride = 1;  // fixed-stride only
  EstimateMode estimate = EstimateMode::kKnownMean;
  double ema_alpha = 0.5;

  static Policy idle_free() { return {PolicyType::kIdleFree}; }
  static Policy shrinking_tail() { return {PolicyType::kShrinkingTail}; }
  static Policy fixed_stride(int stride) {
    return {PolicyType::kFixedStride, stride};
  }

  void validate() const;
  std::string describe() const;
};

// "idlefree", "shrinking-tail" or "stride:N".
Policy parse_policy(std::string_view text);
// "mean" or "ema:ALPHA"; updates the estimate fields of policy.
void parse_runtime_estimate(std::string_view text, Policy& policy);

// Fractional part of t (t >= 0). Values within kFrameSnap of an integer have
// tail 0.
double tail(double t);

// Shrinking-tail rule: wait for the next frame iff tail(s + r) < tail(s).
// The rule presumes r > 1; for r <= 1 it never asks to wait.
bool should_wait(double finish_time, double runtime);

enum class BlockKind { kShrinkingTail, kNonShrinking };
BlockKind classify_block(double start, double end);

struct ScheduleState {
  double now = 0.0;
  int latest_available = 1;  // newest frame that has arrived by now
  int last_processed = 0;    // 0 when nothing has been launched yet
  int last_detector_frame = 0;
  int num_frames = 1;
};

struct ProcessFrame {
  int frame;
  double start;
  bool detector;  // false: a tracker job (fixed-stride only)
};
struct WaitForArrival {
  double until;
};
struct Terminate {};

using Action = std::variant<ProcessFrame, WaitForArrival, Terminate>;

// Decision taken whenever the device becomes free or a wait expires.
// runtime_estimate is the expected detector runtime in frames.
Action next_action(const Policy& policy, const ScheduleState& state,
                   double runtime_estimate);

// Tracks the runtime the shrinking-tail rule plugs in for r.
class RuntimeEstimator {
 public:
  RuntimeEstimator(const Policy& policy, double prior_mean)
      : mode_(policy.estimate), alpha_(policy.ema_alpha), estimate_(prior_mean) {}

  double estimate() const { return estimate_; }
  void observe(double runtime) {
    if (mode_ == EstimateMode::kEma) {
      estimate_ = alpha_ * runtime + (1.0 - alpha_) * estimate_;
    }
  }

 private:
  EstimateMode mode_;
  double alpha_;
  double estimate_;
};

}  // namespace streambench
