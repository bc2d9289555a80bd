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
// Association and forecasting of box tracks.
//
// The Kalman filter runs on [x, y, w, h, dx, dy, dw, dh] with velocities in
// pixels per frame. Prediction steps happen at irregular intervals dt (in
// frames) with
//
//   F = [[I4, dt*I4], [0, I4]],   Q = dt^2 * I8,
//
// and corrections only when a detector result arrives, so a track may be
// predicted several times in a row without an update.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "streambench/core.hpp"

namespace streambench {

double iou(const BoundingBox& a, const BoundingBox& b);

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (prev, next)
  std::vector<std::size_t> unmatched_prev;
  std::vector<std::size_t> unmatched_next;
};

// Greedy IoU matching: take the same-class pair with the highest IoU above
// min_iou, remove both boxes, repeat. Equal IoUs resolve by (prev, next)
// index order.
Matching associate_greedy(std::span<const BoundingBox> prev,
                          std::span<const BoundingBox> next, double min_iou = 0.3);

using Vector4 = Eigen::Matrix<double, 4, 1>;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

struct KalmanTrackState {
  Vector8 mean = Vector8::Zero();
  Matrix8 covariance = Matrix8::Identity();
  double last_time = 0.0;  // seconds
  std::int64_t track_id = 0;
  int class_id = 0;
  double score = 1.0;
  // Number of updates whose innovation covariance needed regularization.
  int regularized_updates = 0;

  // Box at the current mean, with w and h clamped to >= 0.
  BoundingBox box() const;
};

struct KalmanParams {
  Vector4 measurement_noise = Vector4::Ones();  // diagonal of R, px^2
  Vector8 initial_covariance =                  // diagonal of P0
      (Vector8() << 10, 10, 10, 10, 100, 100, 100, 100).finished();
};

// New track at rest at the measured box.
KalmanTrackState kalman_init(const BoundingBox& box, double time,
                             const KalmanParams& params, std::int64_t track_id);

// Update-free prediction to to_time. Throws DomainError if to_time is
// earlier than the state's last_time.
KalmanTrackState kalman_predict(const KalmanTrackState& state, double to_time,
                                double frame_interval);

// Correction with a measured box. The state must already be predicted to the
// measurement time. A singular innovation covariance is regularized by
// 1e-9 * I and counted in regularized_updates.
KalmanTrackState kalman_update(const KalmanTrackState& state,
                               const BoundingBox& measurement, const Matrix4& noise);

bool is_symmetric_psd(const Matrix8& m, double tolerance = 1e-9);

struct Snapshot {
  double time = 0.0;
  BoundingBox box;
};

// Latest associated detections of one object, oldest first (at most three
// are kept).
struct PolyTrack {
  std::int64_t track_id = 0;
  std::vector<Snapshot> history;
};

// Constant-velocity extrapolation from the two latest snapshots.
std::vector<BoundingBox> forecast_linear(std::span<const PolyTrack> tracks,
                                         double to_time);

// Quadratic Lagrange extrapolation through the three latest snapshots,
// falling back to linear (and then to a copy) when fewer distinct times exist.
std::vector<BoundingBox> forecast_quadratic(std::span<const PolyTrack> tracks,
                                            double to_time);

enum class ForecastMethod { kNone, kLinear, kQuadratic, kKalman };

std::string_view to_string(ForecastMethod method);
ForecastMethod parse_forecast_method(std::string_view text);

struct ForecastConfig {
  ForecastMethod method = ForecastMethod::kKalman;
  double min_iou = 0.3;
  KalmanParams kalman;
  // Results an unmatched track survives before it is dropped.
  int keep_unmatched = 0;
};

// Per-sequence track state fed by detector results and queried for
// forecasts. Not thread-safe; use one instance per sequence.
class Forecaster {
 public:
  Forecaster(ForecastConfig config, double frame_interval);

  // Associates a result captured at measurement_time (seconds) with the
  // previous one and updates the tracks. Results older than the last
  // accepted one are ignored; returns whether the result was used.
  bool observe(std::span<const BoundingBox> detections, double measurement_time);

  // Estimated boxes at to_time. Does not modify the tracks.
  Frame forecast(double to_time) const;

  std::size_t num_tracks() const;
  bool has_observation() const { return last_measurement_.has_value(); }

 private:
  struct Track {
    KalmanTrackState kalman;
    PolyTrack poly;
    BoundingBox last_box;
    int misses = 0;
  };

  ForecastConfig config_;
  double frame_interval_;
  std::vector<Track> tracks_;
  std::int64_t next_id_ = 1;
  std::optional<double> last_measurement_;
};

}  // namespace streambench
