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
// Time model and stream containers.
//
// Time is kept in seconds as double. Frames are numbered from 1: frame i
// arrives at t_i = (i - 1) * frame_interval and the benchmark queries the
// world state for frame i at t_i + downstream_latency. Output records carry
// the 1-based index of the input frame they were computed from.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace streambench {

// Tolerance (in frame units) under which a time is considered to lie exactly
// on a frame boundary. Accumulated runtimes drift by far less than this.
inline constexpr double kFrameSnap = 1e-9;

// Returns x rounded to the nearest integer when within kFrameSnap of it.
double snap_frames(double x);

// floor() that treats values within kFrameSnap below an integer as that
// integer.
double floor_frames(double x);

enum class PairingMode {
  kStrictBefore,  // latest output with s_j < t
  kAtOrBefore,    // latest output with s_j <= t
};

std::string_view to_string(PairingMode mode);
PairingMode parse_pairing_mode(std::string_view text);

struct BenchmarkConfig {
  double frame_interval = 1.0 / 30.0;
  int num_frames = 1;
  double downstream_latency = 0.0;
  PairingMode pairing = PairingMode::kStrictBefore;
  std::uint64_t rng_seed = 0;

  // Throws DomainError when an invariant does not hold.
  void validate() const;

  // Arrival time of 1-based frame `frame`.
  double frame_time(int frame) const {
    return static_cast<double>(frame - 1) * frame_interval;
  }
  double query_time(int frame) const {
    return frame_time(frame) + downstream_latency;
  }
  double to_frames(double seconds) const { return seconds / frame_interval; }
  double to_seconds(double frames) const { return frames * frame_interval; }
};

struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  int class_id = 0;
  double score = 1.0;
  std::optional<std::int64_t> track_id;
  bool iscrowd = false;

  double area() const { return w * h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

using Frame = std::vector<BoundingBox>;

struct GroundTruthStream {
  BenchmarkConfig config;
  std::vector<Frame> frames;
  int image_width = 0;
  int image_height = 0;
  // Configured class set. Every box class must be a member.
  std::vector<int> classes;

  void validate() const;
  bool has_class(int class_id) const;
};

struct DetectionSet {
  // frames[i - 1] holds the offline single-frame output for frame i.
  std::vector<Frame> frames;

  void validate(int num_frames, std::span<const int> classes) const;
};

enum class Producer { kDetector, kTracker, kForecaster };

std::string_view to_string(Producer producer);
Producer parse_producer(std::string_view text);

struct OutputRecord {
  Frame prediction;
  double timestamp = 0.0;
  // 1-based input frame index; for forecasts, the latest measurement frame.
  int input_index = 1;
  Producer producer = Producer::kDetector;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

struct OutputStream {
  std::vector<OutputRecord> records;

  bool is_sorted() const;
  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  friend bool operator==(const OutputStream&, const OutputStream&) = default;
};

// Index of the output record held at each query, or nullopt.
using Pairing = std::vector<std::optional<std::size_t>>;

// Zero-order hold at arbitrary query times. Throws ContractError if the
// stream is not sorted by timestamp.
Pairing pair_at_times(const OutputStream& outputs, std::span<const double> times,
                      PairingMode mode);

// Pairs every frame query t_i + eta (i = 1..T) with the record held at that
// time under config.pairing. Result element q corresponds to frame q + 1.
Pairing pair_streams(const OutputStream& outputs, const BenchmarkConfig& config);

struct MismatchSeries {
  // deltas[q] is the mismatch of frame q + 1, in frames.
  std::vector<int> deltas;
  std::vector<bool> answered;
  double mean = 0.0;           // over all queries, unanswered count as 0
  double mean_answered = 0.0;  // over answered queries only
  int max = 0;
  int unanswered = 0;
};

// delta_i = i - k_j for the record j held at query i; zero when no record is
// held. Defaults to the at-or-before comparison used for mismatch analysis.
MismatchSeries temporal_mismatch(const OutputStream& outputs,
                                 const BenchmarkConfig& config,
                                 PairingMode mode = PairingMode::kAtOrBefore);

}  // namespace streambench
