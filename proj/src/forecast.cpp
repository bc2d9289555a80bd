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
#include "streambench/forecast.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "streambench/error.hpp"

namespace streambench {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Matching associate_greedy(std::span<const BoundingBox> prev,
                          std::span<const BoundingBox> next, double min_iou) {
  if (!(min_iou >= 0.0 && min_iou < 1.0)) {
    throw DomainError("min_iou must lie in [0, 1)");
  }
  struct Candidate {
    double overlap;
    std::size_t p;
    std::size_t n;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < prev.size(); ++p) {
    for (std::size_t n = 0; n < next.size(); ++n) {
      if (prev[p].class_id != next[n].class_id) continue;
      const double o = iou(prev[p], next[n]);
      if (o > min_iou) candidates.push_back({o, p, n});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.overlap != b.overlap) return a.overlap > b.overlap;
              if (a.p != b.p) return a.p < b.p;
              return a.n < b.n;
            });

  Matching m;
  std::vector<bool> used_prev(prev.size(), false);
  std::vector<bool> used_next(next.size(), false);
  for (const auto& c : candidates) {
    if (used_prev[c.p] || used_next[c.n]) continue;
    used_prev[c.p] = true;
    used_next[c.n] = true;
    m.pairs.emplace_back(c.p, c.n);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  for (std::size_t p = 0; p < prev.size(); ++p) {
    if (!used_prev[p]) m.unmatched_prev.push_back(p);
  }
  for (std::size_t n = 0; n < next.size(); ++n) {
    if (!used_next[n]) m.unmatched_next.push_back(n);
  }
  return m;
}

BoundingBox KalmanTrackState::box() const {
  BoundingBox b;
  b.x = mean(0);
  b.y = mean(1);
  b.w = std::max(0.0, mean(2));
  b.h = std::max(0.0, mean(3));
  b.class_id = class_id;
  b.score = score;
  b.track_id = track_id;
  return b;
}

KalmanTrackState kalman_init(const BoundingBox& box, double time,
                             const KalmanParams& params, std::int64_t track_id) {
  KalmanTrackState s;
  s.mean << box.x, box.y, box.w, box.h, 0, 0, 0, 0;
  s.covariance = params.initial_covariance.asDiagonal();
  s.last_time = time;
  s.track_id = track_id;
  s.class_id = box.class_id;
  s.score = box.score;
  return s;
}

KalmanTrackState kalman_predict(const KalmanTrackState& state, double to_time,
                                double frame_interval) {
  if (to_time < state.last_time) {
    throw DomainError("cannot predict backwards in time");
  }
  const double dt = (to_time - state.last_time) / frame_interval;
  Matrix8 f = Matrix8::Identity();
  f.topRightCorner<4, 4>() = dt * Matrix4::Identity();

  KalmanTrackState out = state;
  out.mean = f * state.mean;
  Matrix8 p = f * state.covariance * f.transpose();
  p.diagonal().array() += dt * dt;
  out.covariance = 0.5 * (p + p.transpose());
  out.last_time = to_time;
  return out;
}

KalmanTrackState kalman_update(const KalmanTrackState& state,
                               const BoundingBox& measurement, const Matrix4& noise) {
  Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
  h.leftCols<4>() = Matrix4::Identity();

  const Vector4 z(measurement.x, measurement.y, measurement.w, measurement.h);
  const Vector4 innovation = z - h * state.mean;
  Matrix4 s = h * state.covariance * h.transpose() + noise;

  KalmanTrackState out = state;
  Eigen::LLT<Matrix4> llt(s);
  if (llt.info() != Eigen::Success) {
    s += 1e-9 * Matrix4::Identity();
    llt.compute(s);
    ++out.regularized_updates;
    if (llt.info() != Eigen::Success) {
      throw NumericalError("innovation covariance is not positive definite");
    }
  }
  // K = P H^T S^-1
  const Eigen::Matrix<double, 8, 4> gain =
      llt.solve(h * state.covariance).transpose();

  out.mean = state.mean + gain * innovation;
  // Joseph form keeps the covariance positive semidefinite.
  const Matrix8 ikh = Matrix8::Identity() - gain * h;
  Matrix8 p = ikh * state.covariance * ikh.transpose() +
              gain * noise * gain.transpose();
  out.covariance = 0.5 * (p + p.transpose());
  out.score = measurement.score;
  return out;
}

bool is_symmetric_psd(const Matrix8& m, double tolerance) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tolerance) return false;
  Eigen::SelfAdjointEigenSolver<Matrix8> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tolerance;
}

namespace {

using Coords = std::array<double, 4>;

Coords coords(const BoundingBox& b) { return {b.x, b.y, b.w, b.h}; }

BoundingBox with_coords(const BoundingBox& like, const Coords& c) {
  BoundingBox b = like;
  b.x = c[0];
  b.y = c[1];
  b.w = std::max(0.0, c[2]);
  b.h = std::max(0.0, c[3]);
  return b;
}

BoundingBox extrapolate_linear(const PolyTrack& track, double t) {
  const auto& h = track.history;
  const Snapshot& last = h.back();
  if (h.size() < 2) return last.box;
  const Snapshot& prev = h[h.size() - 2];
  const double span = last.time - prev.time;
  if (span == 0.0) return last.box;
  const Coords a = coords(prev.box);
  const Coords b = coords(last.box);
  Coords out;
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = b[k] + (b[k] - a[k]) / span * (t - last.time);
  }
  return with_coords(last.box, out);
}

BoundingBox extrapolate_quadratic(const PolyTrack& track, double t) {
  const auto& h = track.history;
  if (h.size() < 3) return extrapolate_linear(track, t);
  const Snapshot& s0 = h[h.size() - 3];
  const Snapshot& s1 = h[h.size() - 2];
  const Snapshot& s2 = h[h.size() - 1];
  const double t0 = s0.time;
  const double t1 = s1.time;
  const double t2 = s2.time;
  if (t0 == t1 || t1 == t2 || t0 == t2) return extrapolate_linear(track, t);
  const double l0 = (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2));
  const double l1 = (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2));
  const double l2 = (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
  const Coords a = coords(s0.box);
  const Coords b = coords(s1.box);
  const Coords c = coords(s2.box);
  Coords out;
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = l0 * a[k] + l1 * b[k] + l2 * c[k];
  }
  return with_coords(s2.box, out);
}

}  // namespace

std::vector<BoundingBox> forecast_linear(std::span<const PolyTrack> tracks,
                                         double to_time) {
  std::vector<BoundingBox> out;
  out.reserve(tracks.size());
  for (const auto& track : tracks) {
    if (track.history.empty()) continue;
    out.push_back(extrapolate_linear(track, to_time));
  }
  return out;
}

std::vector<BoundingBox> forecast_quadratic(std::span<const PolyTrack> tracks,
                                            double to_time) {
  std::vector<BoundingBox> out;
  out.reserve(tracks.size());
  for (const auto& track : tracks) {
    if (track.history.empty()) continue;
    out.push_back(extrapolate_quadratic(track, to_time));
  }
  return out;
}

std::string_view to_string(ForecastMethod method) {
  switch (method) {
    case ForecastMethod::kNone:
      return "none";
    case ForecastMethod::kLinear:
      return "linear";
    case ForecastMethod::kQuadratic:
      return "quadratic";
    case ForecastMethod::kKalman:
      return "kalman";
  }
  return "none";
}

ForecastMethod parse_forecast_method(std::string_view text) {
  if (text == "none") return ForecastMethod::kNone;
  if (text == "linear") return ForecastMethod::kLinear;
  if (text == "quadratic") return ForecastMethod::kQuadratic;
  if (text == "kalman") return ForecastMethod::kKalman;
  throw ConfigError("unknown forecaster '" + std::string(text) + "'");
}

Forecaster::Forecaster(ForecastConfig config, double frame_interval)
    : config_(std::move(config)), frame_interval_(frame_interval) {
  if (!(frame_interval_ > 0.0)) throw DomainError("frame_interval must be positive");
  if (config_.keep_unmatched < 0) throw ConfigError("keep_unmatched must be >= 0");
}

std::size_t Forecaster::num_tracks() const { return tracks_.size(); }

bool Forecaster::observe(std::span<const BoundingBox> detections,
                         double measurement_time) {
  if (last_measurement_ && measurement_time < *last_measurement_) return false;
  last_measurement_ = measurement_time;

  std::vector<BoundingBox> previous;
  previous.reserve(tracks_.size());
  for (const auto& t : tracks_) previous.push_back(t.last_box);
  const Matching m = associate_greedy(previous, detections, config_.min_iou);

  const Matrix4 noise = config_.kalman.measurement_noise.asDiagonal();
  std::vector<Track> kept;
  kept.reserve(tracks_.size() + m.unmatched_next.size());
  std::vector<bool> matched(tracks_.size(), false);

  for (const auto& [p, n] : m.pairs) {
    matched[p] = true;
    Track t = tracks_[p];
    const BoundingBox& z = detections[n];
    if (config_.method == ForecastMethod::kKalman) {
      t.kalman = kalman_update(kalman_predict(t.kalman, measurement_time, frame_interval_),
                               z, noise);
    }
    t.poly.history.push_back({measurement_time, z});
    if (t.poly.history.size() > 3) t.poly.history.erase(t.poly.history.begin());
    t.last_box = z;
    t.last_box.track_id = t.poly.track_id;
    t.misses = 0;
    kept.push_back(std::move(t));
  }
  for (std::size_t p = 0; p < tracks_.size(); ++p) {
    if (matched[p]) continue;
    if (tracks_[p].misses < config_.keep_unmatched) {
      Track t = tracks_[p];
      ++t.misses;
      kept.push_back(std::move(t));
    }
  }
  for (std::size_t n : m.unmatched_next) {
    Track t;
    const std::int64_t id = next_id_++;
    t.kalman = kalman_init(detections[n], measurement_time, config_.kalman, id);
    t.poly.track_id = id;
    t.poly.history.push_back({measurement_time, detections[n]});
    t.last_box = detections[n];
    t.last_box.track_id = id;
    kept.push_back(std::move(t));
  }
  tracks_ = std::move(kept);
  return true;
}

Frame Forecaster::forecast(double to_time) const {
  Frame out;
  out.reserve(tracks_.size());
  for (const auto& t : tracks_) {
    BoundingBox b;
    switch (config_.method) {
      case ForecastMethod::kNone:
        b = t.last_box;
        break;
      case ForecastMethod::kLinear:
        b = extrapolate_linear(t.poly, to_time);
        break;
      case ForecastMethod::kQuadratic:
        b = extrapolate_quadratic(t.poly, to_time);
        break;
      case ForecastMethod::kKalman: {
        const double at = std::max(to_time, t.kalman.last_time);
        b = kalman_predict(t.kalman, at, frame_interval_).box();
        break;
      }
    }
    b.class_id = t.last_box.class_id;
    b.score = t.last_box.score;
    b.track_id = t.poly.track_id;
    b.iscrowd = false;
    out.push_back(b);
  }
  return out;
}

}  // namespace streambench
