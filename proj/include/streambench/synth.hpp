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
// Synthetic scenes and imperfect detectors for desk-scale benchmarking.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "streambench/core.hpp"

namespace streambench {

enum class MotionKind { kConstantVelocity, kQuadratic, kRandomWalk };

MotionKind parse_motion_kind(std::string_view text);

struct MotionModel {
  MotionKind kind = MotionKind::kConstantVelocity;
  // Initial speed is uniform in [0, max_speed] px/frame, direction uniform.
  double max_speed = 4.0;
  // Quadratic: constant acceleration of magnitude uniform in [0, max_accel].
  double max_accel = 0.1;
  // Random walk: per-frame Gaussian velocity increment.
  double sigma = 0.5;
  // When set, every object moves with exactly this initial velocity.
  std::optional<std::pair<double, double>> velocity;
};

struct SceneSpec {
  int num_objects = 20;
  int num_frames = 300;
  double frame_interval = 1.0 / 30.0;
  MotionModel motion;
  int image_width = 1920;
  int image_height = 1200;
  double min_size = 24.0;
  double max_size = 48.0;
  std::vector<int> classes = {1, 2, 3};
  std::uint64_t seed = 0;
};

// Objects persist for the whole stream and bounce off the image borders
// (reflection keeps the speed). Box sizes are constant per object.
GroundTruthStream gen_scene(const SceneSpec& spec);

enum class ScoreModel {
  kJitter,    // 1 - 0.1 * rms coordinate jitter, floored at 0.01
  kConstant,  // always 1
};

struct DegradeSpec {
  double box_noise = 0.0;  // Gaussian sigma in pixels on x, y, w, h
  double drop_rate = 0.0;  // Bernoulli drop probability per box
  ScoreModel score = ScoreModel::kJitter;
  std::uint64_t seed = 0;
};

// Simulated detector output: jittered, thinned ground truth. Crowd regions
// never produce detections.
DetectionSet degrade(const GroundTruthStream& gt, const DegradeSpec& spec);

}  // namespace streambench
