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
// COCO-protocol box AP and its streaming variant.
//
// The evaluator reproduces the reference COCO tool for bounding boxes:
// per-image greedy matching of score-sorted detections, crowd regions that
// absorb detections without penalty, 101-point interpolated precision and
// averaging over IoU thresholds 0.50:0.05:0.95 and over classes that have
// ground truth.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streambench/core.hpp"

namespace streambench {

struct AreaRange {
  double lo;
  double hi;
};

inline constexpr AreaRange kAreaAll{0.0, 1e10};
inline constexpr AreaRange kAreaSmall{0.0, 32.0 * 32.0};
inline constexpr AreaRange kAreaMedium{32.0 * 32.0, 96.0 * 96.0};
inline constexpr AreaRange kAreaLarge{96.0 * 96.0, 1e10};

// One evaluated image: ground truth and detections share it.
struct CocoImage {
  std::vector<BoundingBox> gts;
  std::vector<BoundingBox> dets;
};

// 0.50, 0.55, ..., 0.95
std::vector<double> coco_iou_thresholds();

// IoU as the reference tool computes it; for a crowd ground truth the union
// is the detection's own area.
double coco_iou(const BoundingBox& det, const BoundingBox& gt, bool crowd);

// Precision table of one evaluation run, indexed [threshold][recall][class].
// Entries are -1 where a class has no non-ignored ground truth.
class CocoEvaluation {
 public:
  CocoEvaluation(std::span<const CocoImage> images, std::vector<int> classes,
                 std::vector<double> iou_thresholds, AreaRange area, int max_dets);

  // Mean of the valid precision entries, optionally restricted to one
  // threshold index and/or one class. nullopt if no entry is valid.
  std::optional<double> mean_precision(std::optional<std::size_t> threshold = {},
                                       std::optional<int> class_id = {}) const;

  const std::vector<double>& iou_thresholds() const { return thresholds_; }
  const std::vector<int>& classes() const { return classes_; }
  double precision(std::size_t t, std::size_t r, std::size_t k) const;

 private:
  std::vector<int> classes_;
  std::vector<double> thresholds_;
  std::vector<double> precision_;  // T x R x K
};

// AP over the given thresholds and area range; -1 when there is no
// non-ignored ground truth in any class (the reference tool's convention).
double coco_ap(std::span<const CocoImage> images, std::span<const double> iou_thresholds,
               AreaRange area = kAreaAll, int max_dets = 100);

struct ApSummary {
  std::optional<double> ap;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
  std::map<int, std::optional<double>> per_class;
};

ApSummary summarize_coco(std::span<const CocoImage> images, std::span<const int> classes);

struct EvalReport {
  ApSummary ap;
  double mismatch_mean = 0.0;
  int mismatch_max = 0;
  int unanswered_queries = 0;
  int num_queries = 0;
  int num_records = 0;
  std::optional<int> max_concurrency;
  std::vector<std::string> notes;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline bool operator==(const ApSummary& a, const ApSummary& b) {
  return a.ap == b.ap && a.ap50 == b.ap50 && a.ap75 == b.ap75 &&
         a.ap_small == b.ap_small && a.ap_medium == b.ap_medium &&
         a.ap_large == b.ap_large && a.per_class == b.per_class;
}

// Pairs every query of the ground-truth stream with the output held at
// t_i + eta and scores the pairs as one COCO evaluation, one image per
// query. Unanswered queries are scored as empty predictions. Throws
// InputError when a prediction uses a class outside the ground-truth set.
EvalReport evaluate_streaming(const GroundTruthStream& gt, const OutputStream& outputs);

// Offline AP of a detection set, every frame paired with its own output.
ApSummary evaluate_offline(const GroundTruthStream& gt, const DetectionSet& detections);

// Pearson correlation. Throws ContractError for mismatched or too short
// inputs and DomainError when either input has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace streambench
