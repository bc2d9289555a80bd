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
#include "streambench/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "streambench/error.hpp"

namespace streambench {

double snap_frames(double x) {
  const double nearest = std::round(x);
  return std::abs(x - nearest) < kFrameSnap ? nearest : x;
}

double floor_frames(double x) { return std::floor(snap_frames(x)); }

std::string_view to_string(PairingMode mode) {
  return mode == PairingMode::kStrictBefore ? "strict-before" : "at-or-before";
}

PairingMode parse_pairing_mode(std::string_view text) {
  if (text == "strict-before" || text == "strict") return PairingMode::kStrictBefore;
  if (text == "at-or-before" || text == "inclusive") return PairingMode::kAtOrBefore;
  throw ConfigError("unknown pairing mode '" + std::string(text) + "'");
}

void BenchmarkConfig::validate() const {
  if (!(frame_interval > 0.0) || !std::isfinite(frame_interval)) {
    throw DomainError("frame_interval must be positive, got " +
                      std::to_string(frame_interval));
  }
  if (num_frames < 1) {
    throw DomainError("num_frames must be at least 1, got " +
                      std::to_string(num_frames));
  }
  if (!(downstream_latency >= 0.0) || !std::isfinite(downstream_latency)) {
    throw DomainError("downstream_latency must be >= 0, got " +
                      std::to_string(downstream_latency));
  }
}

bool GroundTruthStream::has_class(int class_id) const {
  return std::find(classes.begin(), classes.end(), class_id) != classes.end();
}

namespace {

void validate_box(const BoundingBox& box, std::string_view what, std::size_t frame) {
  if (!(box.w >= 0.0) || !(box.h >= 0.0)) {
    throw InputError(std::string(what) + " frame " + std::to_string(frame + 1) +
                     ": negative box extent");
  }
  if (!(box.score >= 0.0 && box.score <= 1.0)) {
    throw InputError(std::string(what) + " frame " + std::to_string(frame + 1) +
                     ": score outside [0, 1]");
  }
}

}  // namespace

void GroundTruthStream::validate() const {
  config.validate();
  if (frames.size() != static_cast<std::size_t>(config.num_frames)) {
    throw InputError("ground truth has " + std::to_string(frames.size()) +
                     " frames, config expects " + std::to_string(config.num_frames));
  }
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const auto& box : frames[f]) {
      validate_box(box, "ground truth", f);
      if (!has_class(box.class_id)) {
        throw InputError("ground truth frame " + std::to_string(f + 1) +
                         ": class " + std::to_string(box.class_id) +
                         " not in class set");
      }
    }
  }
}

void DetectionSet::validate(int num_frames, std::span<const int> classes) const {
  if (frames.size() != static_cast<std::size_t>(num_frames)) {
    throw InputError("detection set has " + std::to_string(frames.size()) +
                     " frames, expected " + std::to_string(num_frames));
  }
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const auto& box : frames[f]) {
      validate_box(box, "detections", f);
      if (std::find(classes.begin(), classes.end(), box.class_id) == classes.end()) {
        throw InputError("detections frame " + std::to_string(f + 1) + ": class " +
                         std::to_string(box.class_id) + " not in class set");
      }
    }
  }
}

std::string_view to_string(Producer producer) {
  switch (producer) {
    case Producer::kDetector:
      return "detector";
    case Producer::kTracker:
      return "tracker";
    case Producer::kForecaster:
      return "forecaster";
  }
  return "detector";
}

Producer parse_producer(std::string_view text) {
  if (text == "detector") return Producer::kDetector;
  if (text == "tracker") return Producer::kTracker;
  if (text == "forecaster") return Producer::kForecaster;
  throw InputError("unknown producer '" + std::string(text) + "'");
}

bool OutputStream::is_sorted() const {
  return std::is_sorted(records.begin(), records.end(),
                        [](const OutputRecord& a, const OutputRecord& b) {
                          return a.timestamp < b.timestamp;
                        });
}

Pairing pair_at_times(const OutputStream& outputs, std::span<const double> times,
                      PairingMode mode) {
  if (!outputs.is_sorted()) {
    throw ContractError("output stream timestamps are not non-decreasing");
  }
  const auto& records = outputs.records;
  Pairing result(times.size());
  for (std::size_t q = 0; q < times.size(); ++q) {
    const double t = times[q];
    // First record that does not qualify; the one before it is the latest
    // qualifying record.
    auto it = mode == PairingMode::kStrictBefore
                  ? std::lower_bound(records.begin(), records.end(), t,
                                     [](const OutputRecord& r, double v) {
                                       return r.timestamp < v;
                                     })
                  : std::upper_bound(records.begin(), records.end(), t,
                                     [](double v, const OutputRecord& r) {
                                       return v < r.timestamp;
                                     });
    if (it != records.begin()) {
      result[q] = static_cast<std::size_t>(std::distance(records.begin(), it) - 1);
    }
  }
  return result;
}

Pairing pair_streams(const OutputStream& outputs, const BenchmarkConfig& config) {
  std::vector<double> times(static_cast<std::size_t>(config.num_frames));
  for (int i = 1; i <= config.num_frames; ++i) {
    times[static_cast<std::size_t>(i - 1)] = config.query_time(i);
  }
  return pair_at_times(outputs, times, config.pairing);
}

MismatchSeries temporal_mismatch(const OutputStream& outputs,
                                 const BenchmarkConfig& config, PairingMode mode) {
  BenchmarkConfig analysis = config;
  analysis.pairing = mode;
  const Pairing pairing = pair_streams(outputs, analysis);

  MismatchSeries series;
  series.deltas.assign(pairing.size(), 0);
  series.answered.assign(pairing.size(), false);
  long long total = 0;
  for (std::size_t q = 0; q < pairing.size(); ++q) {
    if (!pairing[q]) {
      ++series.unanswered;
      continue;
    }
    const int frame = static_cast<int>(q) + 1;
    const int delta = frame - outputs.records[*pairing[q]].input_index;
    series.deltas[q] = delta;
    series.answered[q] = true;
    series.max = std::max(series.max, delta);
    total += delta;
  }
  if (!pairing.empty()) {
    series.mean = static_cast<double>(total) / static_cast<double>(pairing.size());
  }
  const auto answered = pairing.size() - static_cast<std::size_t>(series.unanswered);
  if (answered > 0) {
    series.mean_answered = static_cast<double>(total) / static_cast<double>(answered);
  }
  return series;
}

}  // namespace streambench
