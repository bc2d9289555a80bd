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
#include "streambench/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "streambench/error.hpp"

namespace streambench {

namespace {

constexpr std::size_t kRecallPoints = 101;

// numpy.linspace arithmetic, so thresholds are bit-identical to the
// reference tool's.
std::vector<double> linspace(double start, double stop, std::size_t num) {
  std::vector<double> v(num);
  const double step = (stop - start) / static_cast<double>(num - 1);
  for (std::size_t i = 0; i < num; ++i) v[i] = static_cast<double>(i) * step + start;
  v[num - 1] = stop;
  return v;
}

const std::vector<double>& recall_thresholds() {
  static const std::vector<double> r = linspace(0.0, 1.0, kRecallPoints);
  return r;
}

struct ImageEval {
  std::vector<double> scores;                   // D, descending
  std::vector<std::vector<char>> matched;      // T x D
  std::vector<std::vector<char>> ignored;      // T x D
  std::size_t valid_gts = 0;                   // non-ignored ground truth
};

bool outside(const BoundingBox& b, AreaRange area) {
  const double a = b.area();
  return a < area.lo || a > area.hi;
}

ImageEval evaluate_image(std::vector<const BoundingBox*> gts,
                         std::vector<const BoundingBox*> dts,
                         std::span<const double> thresholds, AreaRange area,
                         int max_dets) {
  std::vector<char> gt_ignore(gts.size());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    gt_ignore[g] = gts[g]->iscrowd || outside(*gts[g], area);
  }
  // Non-ignored ground truth first, stable.
  std::vector<std::size_t> gorder(gts.size());
  std::iota(gorder.begin(), gorder.end(), 0);
  std::stable_sort(gorder.begin(), gorder.end(), [&](std::size_t a, std::size_t b) {
    return gt_ignore[a] < gt_ignore[b];
  });
  std::vector<const BoundingBox*> gs;
  std::vector<char> gig;
  for (std::size_t i : gorder) {
    gs.push_back(gts[i]);
    gig.push_back(gt_ignore[i]);
  }

  std::stable_sort(dts.begin(), dts.end(), [](const BoundingBox* a, const BoundingBox* b) {
    return -a->score < -b->score;
  });
  if (dts.size() > static_cast<std::size_t>(max_dets)) {
    dts.resize(static_cast<std::size_t>(max_dets));
  }

  const std::size_t nt = thresholds.size();
  const std::size_t nd = dts.size();
  const std::size_t ng = gs.size();
  ImageEval ev;
  ev.scores.reserve(nd);
  for (const auto* d : dts) ev.scores.push_back(d->score);
  ev.matched.assign(nt, std::vector<char>(nd, 0));
  ev.ignored.assign(nt, std::vector<char>(nd, 0));
  ev.valid_gts = static_cast<std::size_t>(std::count(gig.begin(), gig.end(), 0));

  std::vector<double> ious(nd * ng, 0.0);
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t g = 0; g < ng; ++g) {
      ious[d * ng + g] = coco_iou(*dts[d], *gs[g], gs[g]->iscrowd);
    }
  }

  if (nd > 0 && ng > 0) {
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<char> gt_taken(ng, 0);
      for (std::size_t d = 0; d < nd; ++d) {
        double best = std::min(thresholds[t], 1.0 - 1e-10);
        long m = -1;
        for (std::size_t g = 0; g < ng; ++g) {
          if (gt_taken[g] && !gs[g]->iscrowd) continue;
          // Once matched to a regular gt, stop at the first ignored one.
          if (m > -1 && !gig[static_cast<std::size_t>(m)] && gig[g]) break;
          if (ious[d * ng + g] < best) continue;
          best = ious[d * ng + g];
          m = static_cast<long>(g);
        }
        if (m == -1) continue;
        ev.ignored[t][d] = gig[static_cast<std::size_t>(m)];
        ev.matched[t][d] = 1;
        gt_taken[static_cast<std::size_t>(m)] = 1;
      }
    }
  }
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t d = 0; d < nd; ++d) {
      if (!ev.matched[t][d] && outside(*dts[d], area)) ev.ignored[t][d] = 1;
    }
  }
  return ev;
}

}  // namespace

std::vector<double> coco_iou_thresholds() { return linspace(0.5, 0.95, 10); }

double coco_iou(const BoundingBox& det, const BoundingBox& gt, bool crowd) {
  const double w = std::min(det.x + det.w, gt.x + gt.w) - std::max(det.x, gt.x);
  if (w <= 0) return 0.0;
  const double h = std::min(det.y + det.h, gt.y + gt.h) - std::max(det.y, gt.y);
  if (h <= 0) return 0.0;
  const double inter = w * h;
  const double da = det.w * det.h;
  const double uni = crowd ? da : da + gt.w * gt.h - inter;
  return inter / uni;
}

CocoEvaluation::CocoEvaluation(std::span<const CocoImage> images, std::vector<int> classes,
                               std::vector<double> iou_thresholds, AreaRange area,
                               int max_dets)
    : classes_(std::move(classes)), thresholds_(std::move(iou_thresholds)) {
  const std::size_t nt = thresholds_.size();
  const std::size_t nk = classes_.size();
  const auto& rec = recall_thresholds();
  precision_.assign(nt * kRecallPoints * nk, -1.0);
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t k = 0; k < nk; ++k) {
    const int cls = classes_[k];
    std::vector<ImageEval> evals;
    for (const auto& img : images) {
      std::vector<const BoundingBox*> gts;
      std::vector<const BoundingBox*> dts;
      for (const auto& g : img.gts) {
        if (g.class_id == cls) gts.push_back(&g);
      }
      for (const auto& d : img.dets) {
        if (d.class_id == cls) dts.push_back(&d);
      }
      if (gts.empty() && dts.empty()) continue;
      evals.push_back(evaluate_image(std::move(gts), std::move(dts), thresholds_, area,
                                     max_dets));
    }
    if (evals.empty()) continue;

    std::size_t valid = 0;
    std::vector<double> scores;
    for (const auto& e : evals) {
      valid += e.valid_gts;
      scores.insert(scores.end(), e.scores.begin(), e.scores.end());
    }
    if (valid == 0) continue;

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return -scores[a] < -scores[b];
    });

    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<char> matched;
      std::vector<char> ignored;
      for (const auto& e : evals) {
        matched.insert(matched.end(), e.matched[t].begin(), e.matched[t].end());
        ignored.insert(ignored.end(), e.ignored[t].begin(), e.ignored[t].end());
      }
      const std::size_t nd = order.size();
      std::vector<double> rc(nd);
      std::vector<double> pr(nd);
      double tp = 0.0;
      double fp = 0.0;
      for (std::size_t i = 0; i < nd; ++i) {
        const std::size_t d = order[i];
        if (!ignored[d]) {
          if (matched[d]) {
            tp += 1.0;
          } else {
            fp += 1.0;
          }
        }
        rc[i] = tp / static_cast<double>(valid);
        pr[i] = tp / (fp + tp + eps);
      }
      for (std::size_t i = nd; i-- > 1;) {
        if (pr[i] > pr[i - 1]) pr[i - 1] = pr[i];
      }
      for (std::size_t r = 0; r < kRecallPoints; ++r) {
        const auto it = std::lower_bound(rc.begin(), rc.end(), rec[r]);
        const auto idx = static_cast<std::size_t>(it - rc.begin());
        double q = 0.0;
        if (idx < nd) q = pr[idx];
        precision_[(t * kRecallPoints + r) * nk + k] = q;
      }
    }
  }
}

double CocoEvaluation::precision(std::size_t t, std::size_t r, std::size_t k) const {
  return precision_[(t * kRecallPoints + r) * classes_.size() + k];
}

std::optional<double> CocoEvaluation::mean_precision(std::optional<std::size_t> threshold,
                                                     std::optional<int> class_id) const {
  const std::size_t nk = classes_.size();
  std::optional<std::size_t> kfilter;
  if (class_id) {
    const auto it = std::find(classes_.begin(), classes_.end(), *class_id);
    if (it == classes_.end()) return std::nullopt;
    kfilter = static_cast<std::size_t>(it - classes_.begin());
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < thresholds_.size(); ++t) {
    if (threshold && t != *threshold) continue;
    for (std::size_t r = 0; r < kRecallPoints; ++r) {
      for (std::size_t k = 0; k < nk; ++k) {
        if (kfilter && k != *kfilter) continue;
        const double p = precision(t, r, k);
        if (p > -1.0) {
          sum += p;
          ++n;
        }
      }
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

namespace {

std::vector<int> gt_classes(std::span<const CocoImage> images) {
  std::vector<int> classes;
  for (const auto& img : images) {
    for (const auto& g : img.gts) classes.push_back(g.class_id);
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

}  // namespace

double coco_ap(std::span<const CocoImage> images, std::span<const double> iou_thresholds,
               AreaRange area, int max_dets) {
  CocoEvaluation ev(images, gt_classes(images),
                    std::vector<double>(iou_thresholds.begin(), iou_thresholds.end()),
                    area, max_dets);
  return ev.mean_precision().value_or(-1.0);
}

ApSummary summarize_coco(std::span<const CocoImage> images, std::span<const int> classes) {
  std::vector<int> cls(classes.begin(), classes.end());
  std::sort(cls.begin(), cls.end());
  const auto thresholds = coco_iou_thresholds();
  ApSummary s;
  const CocoEvaluation all(images, cls, thresholds, kAreaAll, 100);
  s.ap = all.mean_precision();
  s.ap50 = all.mean_precision(0);
  s.ap75 = all.mean_precision(5);
  for (int c : cls) s.per_class[c] = all.mean_precision(std::nullopt, c);
  s.ap_small = CocoEvaluation(images, cls, thresholds, kAreaSmall, 100).mean_precision();
  s.ap_medium = CocoEvaluation(images, cls, thresholds, kAreaMedium, 100).mean_precision();
  s.ap_large = CocoEvaluation(images, cls, thresholds, kAreaLarge, 100).mean_precision();
  return s;
}

EvalReport evaluate_streaming(const GroundTruthStream& gt, const OutputStream& outputs) {
  gt.validate();
  for (std::size_t j = 0; j < outputs.records.size(); ++j) {
    for (const auto& b : outputs.records[j].prediction) {
      if (!gt.has_class(b.class_id)) {
        throw InputError("output record " + std::to_string(j) + " uses class " +
                         std::to_string(b.class_id) + " outside the ground-truth class set");
      }
    }
  }
  const Pairing pairing = pair_streams(outputs, gt.config);

  std::vector<CocoImage> images(pairing.size());
  EvalReport report;
  for (std::size_t q = 0; q < pairing.size(); ++q) {
    images[q].gts = gt.frames[q];
    if (pairing[q]) {
      images[q].dets = outputs.records[*pairing[q]].prediction;
    } else {
      ++report.unanswered_queries;
    }
  }
  report.ap = summarize_coco(images, gt.classes);
  const MismatchSeries mismatch = temporal_mismatch(outputs, gt.config);
  report.mismatch_mean = mismatch.mean;
  report.mismatch_max = mismatch.max;
  report.num_queries = static_cast<int>(pairing.size());
  report.num_records = static_cast<int>(outputs.records.size());
  if (report.unanswered_queries > 0) {
    report.notes.push_back(std::to_string(report.unanswered_queries) +
                           " queries had no output and were scored as empty predictions");
  }
  return report;
}

ApSummary evaluate_offline(const GroundTruthStream& gt, const DetectionSet& detections) {
  gt.validate();
  detections.validate(gt.config.num_frames, gt.classes);
  std::vector<CocoImage> images(gt.frames.size());
  for (std::size_t q = 0; q < images.size(); ++q) {
    images[q].gts = gt.frames[q];
    images[q].dets = detections.frames[q];
  }
  return summarize_coco(images, gt.classes);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ContractError("pearson needs two inputs of equal length >= 2");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DomainError("pearson correlation undefined for zero variance");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace streambench
