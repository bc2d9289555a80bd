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
#include "streambench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "streambench/error.hpp"
#include "streambench/profiles.hpp"

namespace streambench {

MotionKind parse_motion_kind(std::string_view text) {
  if (text == "constant-velocity" || text == "cv") return MotionKind::kConstantVelocity;
  if (text == "quadratic") return MotionKind::kQuadratic;
  if (text == "random-walk") return MotionKind::kRandomWalk;
  throw ConfigError("unknown motion model '" + std::string(text) + "'");
}

namespace {

struct Axis {
  double pos;
  double vel;
  double acc;
};

// Keeps pos in [0, limit], mirroring position and motion at each wall.
void reflect(Axis& a, double limit) {
  if (limit <= 0.0) {
    a.pos = 0.0;
    return;
  }
  for (int guard = 0; guard < 64 && (a.pos < 0.0 || a.pos > limit); ++guard) {
    if (a.pos < 0.0) {
      a.pos = -a.pos;
    } else {
      a.pos = 2.0 * limit - a.pos;
    }
    a.vel = -a.vel;
    a.acc = -a.acc;
  }
  a.pos = std::clamp(a.pos, 0.0, limit);
}

struct Object {
  Axis x;
  Axis y;
  double w;
  double h;
  int class_id;
};

}  // namespace

GroundTruthStream gen_scene(const SceneSpec& spec) {
  if (spec.num_objects < 0 || spec.num_frames < 1 || spec.image_width <= 0 ||
      spec.image_height <= 0 || !(spec.min_size > 0.0) || spec.max_size < spec.min_size ||
      spec.classes.empty() || spec.motion.max_speed < 0.0) {
    throw DomainError("invalid scene specification");
  }
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_class(0, spec.classes.size() - 1);
  std::normal_distribution<double> walk(0.0, spec.motion.sigma > 0 ? spec.motion.sigma : 1.0);
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<Object> objects;
  for (int o = 0; o < spec.num_objects; ++o) {
    Object obj;
    obj.w = spec.min_size + (spec.max_size - spec.min_size) * unit(rng);
    obj.h = spec.min_size + (spec.max_size - spec.min_size) * unit(rng);
    obj.w = std::min(obj.w, static_cast<double>(spec.image_width));
    obj.h = std::min(obj.h, static_cast<double>(spec.image_height));
    obj.x.pos = (spec.image_width - obj.w) * unit(rng);
    obj.y.pos = (spec.image_height - obj.h) * unit(rng);
    const double speed = spec.motion.max_speed * unit(rng);
    const double heading = two_pi * unit(rng);
    obj.x.vel = speed * std::cos(heading);
    obj.y.vel = speed * std::sin(heading);
    if (spec.motion.velocity) {
      obj.x.vel = spec.motion.velocity->first;
      obj.y.vel = spec.motion.velocity->second;
    }
    obj.x.acc = 0.0;
    obj.y.acc = 0.0;
    if (spec.motion.kind == MotionKind::kQuadratic) {
      const double mag = spec.motion.max_accel * unit(rng);
      const double dir = two_pi * unit(rng);
      obj.x.acc = mag * std::cos(dir);
      obj.y.acc = mag * std::sin(dir);
    }
    obj.class_id = spec.classes[pick_class(rng)];
    objects.push_back(obj);
  }

  GroundTruthStream gt;
  gt.config.frame_interval = spec.frame_interval;
  gt.config.num_frames = spec.num_frames;
  gt.config.rng_seed = spec.seed;
  gt.image_width = spec.image_width;
  gt.image_height = spec.image_height;
  gt.classes = spec.classes;
  std::sort(gt.classes.begin(), gt.classes.end());
  gt.classes.erase(std::unique(gt.classes.begin(), gt.classes.end()), gt.classes.end());
  gt.frames.resize(static_cast<std::size_t>(spec.num_frames));

  for (int f = 0; f < spec.num_frames; ++f) {
    auto& frame = gt.frames[static_cast<std::size_t>(f)];
    for (std::size_t o = 0; o < objects.size(); ++o) {
      Object& obj = objects[o];
      if (f > 0) {
        for (Axis* a : {&obj.x, &obj.y}) {
          if (spec.motion.kind == MotionKind::kRandomWalk) a->vel += walk(rng);
          a->pos += a->vel + 0.5 * a->acc;
          a->vel += a->acc;
        }
        reflect(obj.x, spec.image_width - obj.w);
        reflect(obj.y, spec.image_height - obj.h);
      }
      BoundingBox b;
      b.x = obj.x.pos;
      b.y = obj.y.pos;
      b.w = obj.w;
      b.h = obj.h;
      b.class_id = obj.class_id;
      b.score = 1.0;
      b.track_id = static_cast<std::int64_t>(o + 1);
      frame.push_back(b);
    }
  }
  return gt;
}

DetectionSet degrade(const GroundTruthStream& gt, const DegradeSpec& spec) {
  if (!(spec.box_noise >= 0.0) || !(spec.drop_rate >= 0.0 && spec.drop_rate < 1.0)) {
    throw DomainError("degrade requires noise >= 0 and drop rate in [0, 1)");
  }
  Rng rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution drop(spec.drop_rate);

  DetectionSet out;
  out.frames.resize(gt.frames.size());
  for (std::size_t f = 0; f < gt.frames.size(); ++f) {
    for (const auto& g : gt.frames[f]) {
      if (g.iscrowd) continue;
      const bool dropped = drop(rng);
      double j[4];
      for (double& v : j) v = spec.box_noise * noise(rng);
      if (dropped) continue;
      BoundingBox d = g;
      d.x += j[0];
      d.y += j[1];
      d.w = std::max(0.0, d.w + j[2]);
      d.h = std::max(0.0, d.h + j[3]);
      d.track_id.reset();
      if (spec.score == ScoreModel::kJitter) {
        const double rms =
            std::sqrt((j[0] * j[0] + j[1] * j[1] + j[2] * j[2] + j[3] * j[3]) / 4.0);
        d.score = std::max(0.01, 1.0 - 0.1 * rms);
      } else {
        d.score = 1.0;
      }
      out.frames[f].push_back(d);
    }
  }
  return out;
}

}  // namespace streambench
