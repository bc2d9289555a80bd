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
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "streambench/error.hpp"
#include "streambench/evalmetrics.hpp"
#include "streambench/io.hpp"
#include "support/helpers.hpp"

using namespace streambench;
using streambench::testing::data_path;
using streambench::testing::frame_config;

namespace {

BoundingBox box(double x, double y, double w, double h, double score = 1.0, int cls = 1) {
  return BoundingBox{x, y, w, h, cls, score};
}

double ap(const std::vector<CocoImage>& images) {
  const auto t = coco_iou_thresholds();
  return coco_ap(images, t);
}

GroundTruthStream small_stream() {
  GroundTruthStream gt;
  gt.config = frame_config(4, 1.0 / 30.0);
  gt.classes = {1, 2};
  gt.image_width = 200;
  gt.image_height = 200;
  gt.frames = {{box(0, 0, 40, 40), box(100, 100, 20, 30, 1.0, 2)},
               {box(5, 0, 40, 40)},
               {},
               {box(10, 0, 40, 40), box(120, 90, 60, 60, 1.0, 2)}};
  return gt;
}

std::vector<CocoImage> random_images(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(0.0, 200.0);
  std::uniform_real_distribution<double> size(5.0, 120.0);
  std::uniform_real_distribution<double> jit(-6.0, 6.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> cls(1, 2);
  std::vector<CocoImage> images(n);
  for (auto& im : images) {
    for (int g = 0; g < 4; ++g) {
      BoundingBox b = box(pos(rng), pos(rng), size(rng), size(rng), 1.0, cls(rng));
      b.iscrowd = u(rng) < 0.1;
      im.gts.push_back(b);
      if (u(rng) < 0.8) {
        im.dets.push_back(box(b.x + jit(rng), b.y + jit(rng), b.w + jit(rng), b.h + jit(rng),
                              u(rng), b.class_id));
      }
    }
    for (int f = 0; f < 2; ++f) {
      im.dets.push_back(box(pos(rng), pos(rng), size(rng), size(rng), u(rng), cls(rng)));
    }
  }
  return images;
}

}  // namespace

TEST_CASE("iou thresholds") {
  const auto t = coco_iou_thresholds();
  REQUIRE(t.size() == 10);
  CHECK(t.front() == 0.5);
  CHECK(t.back() == 0.95);
  CHECK(t[5] == doctest::Approx(0.75));
}

TEST_CASE("crowd iou uses the detection area as the union") {
  const BoundingBox crowd = box(0, 0, 100, 100);
  const BoundingBox det = box(10, 10, 20, 20);
  CHECK(coco_iou(det, crowd, true) == 1.0);
  CHECK(coco_iou(det, crowd, false) == doctest::Approx(400.0 / 10000.0));
}

TEST_CASE("a single detection at IoU 0.56 scores 0.2") {
  const std::vector<CocoImage> images = {{{box(0, 0, 100, 100)}, {box(0, 0, 100, 56, 0.9)}}};
  CHECK(ap(images) == doctest::Approx(0.2));
}

TEST_CASE("a duplicate detection is a false positive") {
  const std::vector<CocoImage> clean = {
      {{box(0, 0, 50, 50), box(200, 200, 50, 50)}, {box(0, 0, 50, 50, 0.9), box(200, 200, 50, 50, 0.7)}}};
  CHECK(ap(clean) == 1.0);
  auto dup = clean;
  dup[0].dets.push_back(box(0, 0, 50, 50, 0.8));
  // Ranked TP, FP, TP: precision 1 up to recall 0.5, then 2/3.
  CHECK(ap(dup) == doctest::Approx((51.0 + 50.0 * 2.0 / 3.0) / 101.0));
}

TEST_CASE("detections inside a crowd region are not false positives") {
  BoundingBox crowd = box(100, 100, 80, 80);
  crowd.iscrowd = true;
  std::vector<CocoImage> images = {
      {{box(0, 0, 50, 50), crowd}, {box(0, 0, 50, 50, 0.5), box(110, 110, 20, 20, 0.9)}}};
  // A single true positive has precision 1 / (1 + eps).
  CHECK(ap(images) == doctest::Approx(1.0).epsilon(1e-15));
  images[0].gts[1].iscrowd = false;
  CHECK(ap(images) < 0.6);
}

TEST_CASE("no ground truth gives -1, no detections gives 0") {
  const std::vector<CocoImage> none = {{{}, {box(0, 0, 5, 5, 0.5)}}};
  CHECK(ap(none) == -1.0);
  const std::vector<CocoImage> missed = {{{box(0, 0, 5, 5)}, {}}};
  CHECK(ap(missed) == 0.0);
}

TEST_CASE("max detections per image truncates by score") {
  CocoImage im;
  im.gts.push_back(box(0, 0, 10, 10));
  for (int k = 0; k < 3; ++k) im.dets.push_back(box(500 + 20 * k, 0, 10, 10, 0.9));
  im.dets.push_back(box(0, 0, 10, 10, 0.1));
  const std::vector<CocoImage> images = {im};
  const auto t = coco_iou_thresholds();
  CHECK(coco_ap(images, t, kAreaAll, 3) == 0.0);
  CHECK(coco_ap(images, t, kAreaAll, 4) == doctest::Approx(0.25));
}

TEST_CASE("area ranges filter ground truth and unmatched detections") {
  const std::vector<CocoImage> images = {
      {{box(0, 0, 10, 10), box(100, 100, 200, 200)},
       {box(0, 0, 10, 10, 0.9), box(400, 400, 150, 150, 0.95)}}};
  const auto t = coco_iou_thresholds();
  CHECK(coco_ap(images, t, kAreaSmall) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(coco_ap(images, t, kAreaLarge) == 0.0);
  CHECK(coco_ap(images, t, kAreaMedium) == -1.0);
}

TEST_CASE("AP is invariant to detection order with distinct scores") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto images = random_images(rng, 6);
    const double base = ap(images);
    for (auto& im : images) std::shuffle(im.dets.begin(), im.dets.end(), rng);
    CHECK(ap(images) == base);
  }
}

TEST_CASE("adding an exact top-scoring hit on a missed object never lowers AP") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    auto images = random_images(rng, 5);
    const double before = ap(images);
    bool added = false;
    for (auto& im : images) {
      for (const auto& g : im.gts) {
        if (g.iscrowd) continue;
        const bool missed = std::none_of(im.dets.begin(), im.dets.end(), [&](const auto& d) {
          return d.class_id == g.class_id && coco_iou(d, g, false) >= 0.5;
        });
        if (missed) {
          BoundingBox d = g;
          d.score = 1.0;
          im.dets.push_back(d);
          added = true;
          break;
        }
      }
      if (added) break;
    }
    if (added) CHECK(ap(images) >= before);
  }
}

TEST_CASE("the 20-frame fixture matches the reference evaluator") {
  const CocoGroundTruth gt = read_coco_ground_truth(data_path("coco20/gt.json"));
  const DetectionSet dets = read_coco_detections(data_path("coco20/dets.json"), gt);
  const Json expected = read_json_file(data_path("coco20/expected.json"));
  REQUIRE(gt.stream.frames.size() == 20);
  std::vector<CocoImage> images;
  for (std::size_t i = 0; i < 20; ++i) images.push_back({gt.stream.frames[i], dets.frames[i]});

  const ApSummary s = summarize_coco(images, gt.stream.classes);
  CHECK(*s.ap == doctest::Approx(expected["AP"].get<double>()).epsilon(1e-9));
  CHECK(*s.ap50 == doctest::Approx(expected["AP50"].get<double>()).epsilon(1e-9));
  CHECK(*s.ap75 == doctest::Approx(expected["AP75"].get<double>()).epsilon(1e-9));
  CHECK(*s.ap_small == doctest::Approx(expected["AP_S"].get<double>()).epsilon(1e-9));
  CHECK(*s.ap_medium == doctest::Approx(expected["AP_M"].get<double>()).epsilon(1e-9));
  CHECK(*s.ap_large == doctest::Approx(expected["AP_L"].get<double>()).epsilon(1e-9));
  for (const auto& [cls, v] : expected["per_class"].items()) {
    CHECK(*s.per_class.at(std::stoi(cls)) == doctest::Approx(v.get<double>()).epsilon(1e-9));
  }
  const CocoEvaluation ev(images, gt.stream.classes, coco_iou_thresholds(), kAreaAll, 100);
  for (std::size_t t = 0; t < 10; ++t) {
    CHECK(*ev.mean_precision(t) ==
          doctest::Approx(expected["per_threshold"][t].get<double>()).epsilon(1e-9));
  }
}

TEST_CASE("perfect instantaneous outputs score 1, empty outputs 0") {
  const GroundTruthStream gt = small_stream();
  OutputStream perfect;
  for (int i = 1; i <= 4; ++i) {
    OutputRecord r;
    r.prediction = gt.frames[i - 1];
    r.timestamp = gt.config.frame_time(i) - 1e-6;
    r.input_index = i;
    perfect.records.push_back(r);
  }
  const EvalReport good = evaluate_streaming(gt, perfect);
  CHECK(*good.ap.ap == 1.0);
  CHECK(good.unanswered_queries == 0);
  CHECK(good.num_queries == 4);
  CHECK(good.num_records == 4);

  const EvalReport empty = evaluate_streaming(gt, OutputStream{});
  CHECK(*empty.ap.ap == 0.0);
  CHECK(empty.unanswered_queries == 4);
  CHECK_FALSE(empty.notes.empty());
}

TEST_CASE("instantaneous streaming equals offline evaluation") {
  std::mt19937_64 rng(31);
  GroundTruthStream gt;
  const auto images = random_images(rng, 12);
  gt.config = frame_config(12, 0.05);
  gt.classes = {1, 2};
  DetectionSet dets;
  OutputStream out;
  for (int i = 1; i <= 12; ++i) {
    gt.frames.push_back(images[i - 1].gts);
    dets.frames.push_back(images[i - 1].dets);
    OutputRecord r;
    r.prediction = images[i - 1].dets;
    r.timestamp = gt.config.frame_time(i) - 1e-6;
    r.input_index = i;
    out.records.push_back(r);
  }
  CHECK(evaluate_streaming(gt, out).ap == evaluate_offline(gt, dets));
}

TEST_CASE("classes outside the configured set are rejected") {
  const GroundTruthStream gt = small_stream();
  OutputStream out;
  OutputRecord r;
  r.prediction = {box(0, 0, 5, 5, 0.5, 9)};
  out.records.push_back(r);
  CHECK_THROWS_AS(evaluate_streaming(gt, out), InputError);
}

TEST_CASE("ap values stay in range on random streams") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto images = random_images(rng, 8);
    const std::vector<int> cls = {1, 2, 3};
    const ApSummary s = summarize_coco(images, cls);
    for (const auto& v : {s.ap, s.ap50, s.ap75, s.ap_small, s.ap_medium, s.ap_large}) {
      if (v) CHECK((*v >= 0.0 && *v <= 1.0));
    }
    CHECK_FALSE(s.per_class.at(3).has_value());
  }
}

TEST_CASE("pearson correlation") {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {2, 4, 7};
  const std::vector<double> neg = {-1, -2, -3};
  CHECK(pearson(a, a) == doctest::Approx(1.0));
  CHECK(pearson(a, neg) == doctest::Approx(-1.0));
  // 5 / sqrt(2 * 114 / 9)
  CHECK(pearson(a, b) == doctest::Approx(5.0 / std::sqrt(2.0 * 114.0 / 9.0)));
  CHECK(pearson(a, b) == doctest::Approx(0.9934).epsilon(1e-4));
  const std::vector<double> flat = {2, 2, 2};
  CHECK_THROWS_AS(pearson(a, flat), DomainError);
  const std::vector<double> shorter = {1, 2};
  CHECK_THROWS_AS(pearson(a, shorter), ContractError);
  const std::vector<double> one = {1};
  CHECK_THROWS_AS(pearson(one, one), ContractError);
}
