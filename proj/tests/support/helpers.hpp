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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "streambench/core.hpp"
#include "streambench/profiles.hpp"

namespace streambench::testing {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(STREAMBENCH_TEST_DATA) / rel;
}

inline BenchmarkConfig frame_config(int num_frames, double frame_interval = 1.0) {
  BenchmarkConfig c;
  c.frame_interval = frame_interval;
  c.num_frames = num_frames;
  return c;
}

// Records at the given timestamps (seconds) with the given 1-based inputs.
inline OutputStream make_stream(const std::vector<double>& timestamps,
                                const std::vector<int>& inputs = {}) {
  OutputStream s;
  for (std::size_t j = 0; j < timestamps.size(); ++j) {
    OutputRecord r;
    r.timestamp = timestamps[j];
    r.input_index = inputs.empty() ? 1 : inputs[j];
    s.records.push_back(r);
  }
  return s;
}

// num_frames frames, each holding one box of class 1 at x = frame index.
inline std::vector<Frame> moving_frames(int num_frames) {
  std::vector<Frame> frames(num_frames);
  for (int i = 0; i < num_frames; ++i) {
    frames[i].push_back(BoundingBox{static_cast<double>(i), 0.0, 50.0, 50.0, 1});
  }
  return frames;
}

inline ProfileSet constant_detector(double runtime_frames, double frame_interval) {
  ProfileSet p;
  p.set(kDetectorModule, RuntimeModel::constant(runtime_frames * frame_interval));
  return p;
}

}  // namespace streambench::testing
