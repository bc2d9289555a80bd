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
// streambench: command-line front end.
//
//   streambench stream   --gt gt.json --detections det.json --profile p.json
//   streambench simulate ...same inputs, no forecasting...
//   streambench eval     --gt gt.json --outputs stream.json
//   streambench mismatch --outputs stream.json --num-frames 300
//   streambench sweep    --spec sweep.json --jobs 4
//   streambench synth    --out-dir fixture/
//
// Exit codes: 0 success, 2 bad input or usage, 1 anything else.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "streambench/benchmark.hpp"
#include "streambench/error.hpp"
#include "streambench/io.hpp"
#include "streambench/sweep.hpp"
#include "streambench/synth.hpp"

namespace fs = std::filesystem;
using namespace streambench;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

struct RunArgs {
  std::string gt;
  std::string detections;
  std::string profile;
  std::string manifest;
  std::string sequence;
  double fps = 30.0;
  std::vector<std::string> scales;
  std::string policy = "default";
  std::string runtime_estimate = "mean";
  std::string compute = "single";
  std::string forecast;
  std::string tracker = "ideal";
  double min_iou = 0.3;
  std::vector<double> kf_r;
  std::vector<double> kf_p0;
  int keep_unmatched = 0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::string report;
  std::string trace;
  std::string summary;
  std::string outputs;
};

struct EvalArgs {
  std::string gt;
  std::string outputs;
  std::string detections;
  double fps = 30.0;
  double eta = 0.0;
  std::string pairing = "strict-before";
  std::string report;
};

struct MismatchArgs {
  std::string outputs;
  std::string gt;
  int num_frames = 0;
  double fps = 30.0;
  double eta = 0.0;
  std::string pairing = "at-or-before";
  std::string report;
};

struct SweepArgs {
  std::string spec;
  int jobs = 1;
  std::string out;
};

struct SynthArgs {
  std::string out_dir;
  int objects = 20;
  int frames = 300;
  double fps = 30.0;
  std::string motion = "constant-velocity";
  double max_speed = 4.0;
  double max_accel = 0.1;
  double sigma = 0.5;
  double min_size = 24.0;
  double max_size = 48.0;
  int width = 1920;
  int height = 1200;
  std::vector<int> classes = {1, 2, 3};
  double noise = 0.0;
  double drop = 0.0;
  std::string score = "jitter";
  double runtime_ms = 0.0;
  double runtime_spread = 0.0;
  int runtime_samples = 200;
  std::uint64_t seed = 0;
};

void emit_json(const Json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json_file(path, doc);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  return out;
}

void apply_scales(ProfileSet& profiles, const std::vector<std::string>& scales) {
  for (const auto& s : scales) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--scale expects module=factor, got '" + s + "'");
    }
    double factor = 0.0;
    try {
      factor = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--scale: bad factor in '" + s + "'");
    }
    profiles.scale(s.substr(0, eq), factor);
  }
}

KalmanParams kalman_params(const RunArgs& a) {
  KalmanParams p;
  if (a.kf_r.size() == 1) {
    p.measurement_noise = Vector4::Constant(a.kf_r[0]);
  } else if (a.kf_r.size() == 4) {
    p.measurement_noise = Vector4(a.kf_r.data());
  } else if (!a.kf_r.empty()) {
    throw ConfigError("--kf-r takes 1 or 4 values");
  }
  if (a.kf_p0.size() == 2) {
    p.initial_covariance << Vector4::Constant(a.kf_p0[0]), Vector4::Constant(a.kf_p0[1]);
  } else if (a.kf_p0.size() == 8) {
    p.initial_covariance = Vector8(a.kf_p0.data());
  } else if (!a.kf_p0.empty()) {
    throw ConfigError("--kf-p0 takes 2 (position, velocity) or 8 values");
  }
  for (int i = 0; i < 4; ++i) {
    if (!(p.measurement_noise[i] >= 0.0)) throw DomainError("--kf-r must be >= 0");
  }
  for (int i = 0; i < 8; ++i) {
    if (!(p.initial_covariance[i] > 0.0)) throw DomainError("--kf-p0 must be > 0");
  }
  return p;
}

double resolve_fps(const RunArgs& a) {
  if (a.manifest.empty()) return a.fps;
  const auto seqs = read_manifest(a.manifest);
  if (seqs.empty()) throw InputError(a.manifest + ": no sequences");
  if (a.sequence.empty()) return seqs.front().fps;
  for (const auto& s : seqs) {
    if (s.name == a.sequence) return s.fps;
  }
  throw InputError(a.manifest + ": no sequence named '" + a.sequence + "'");
}

int cmd_run(const RunArgs& a, bool with_forecast) {
  const double fps = resolve_fps(a);
  if (!(fps > 0.0)) throw DomainError("--fps must be > 0");
  LoadedInputs in = load_inputs(a.gt, a.detections, a.profile, 1.0 / fps);
  apply_scales(in.profiles, a.scales);

  BenchmarkSetup setup;
  setup.gt = in.gt.stream;
  setup.gt.config.downstream_latency = a.eta;
  setup.gt.config.rng_seed = a.seed;
  setup.detections = std::move(in.detections);
  setup.profiles = std::move(in.profiles);

  auto& sim = setup.options.simulation;
  sim.compute = parse_compute_kind(a.compute);
  sim.policy = a.policy == "default" ? default_policy(sim.compute) : parse_policy(a.policy);
  parse_runtime_estimate(a.runtime_estimate, sim.policy);
  if (a.tracker == "ideal") {
    sim.tracker = TrackerFidelity::kIdeal;
  } else if (a.tracker == "hold-last") {
    sim.tracker = TrackerFidelity::kHoldLast;
  } else {
    throw ConfigError("unknown tracker fidelity '" + a.tracker + "'");
  }
  sim.tracker_min_iou = a.min_iou;

  auto& fc = setup.options.forecast;
  const std::string method = a.forecast.empty() ? (with_forecast ? "kalman" : "none") : a.forecast;
  fc.method = parse_forecast_method(method);
  if (!with_forecast && fc.method != ForecastMethod::kNone) {
    throw ConfigError("simulate does not forecast; use the stream subcommand");
  }
  fc.min_iou = a.min_iou;
  fc.kalman = kalman_params(a);
  fc.keep_unmatched = a.keep_unmatched;

  const BenchmarkRun run = run_benchmark(setup, a.seed);
  emit_json(report_json(run.report), a.report);
  if (!a.trace.empty()) {
    auto out = open_output(a.trace);
    write_trace_csv(out, run.simulation.trace);
  }
  if (!a.summary.empty()) write_json_file(a.summary, trace_summary_json(run.simulation.trace));
  if (!a.outputs.empty()) {
    write_json_file(a.outputs,
                    output_stream_json(run.simulation.outputs, setup.gt.config.frame_interval));
  }
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  if (!(a.fps > 0.0)) throw DomainError("--fps must be > 0");
  CocoGroundTruth gt = read_coco_ground_truth(a.gt, 1.0 / a.fps);
  gt.stream.config.downstream_latency = a.eta;
  gt.stream.config.pairing = parse_pairing_mode(a.pairing);
  if (!a.detections.empty()) {
    const DetectionSet dets = read_coco_detections(a.detections, gt);
    EvalReport report;
    report.ap = evaluate_offline(gt.stream, dets);
    report.num_queries = gt.stream.config.num_frames;
    report.notes.push_back("offline evaluation: no latency");
    emit_json(report_json(report), a.report);
    return 0;
  }
  if (a.outputs.empty()) throw ConfigError("eval needs --outputs or --detections");
  const OutputStream outputs = parse_output_stream(read_json_file(a.outputs), a.outputs);
  emit_json(report_json(evaluate_streaming(gt.stream, outputs)), a.report);
  return 0;
}

int cmd_mismatch(const MismatchArgs& a) {
  if (!(a.fps > 0.0)) throw DomainError("--fps must be > 0");
  const Json doc = read_json_file(a.outputs);
  const OutputStream outputs = parse_output_stream(doc, a.outputs);
  BenchmarkConfig config;
  config.frame_interval = doc.value("frame_interval", 1.0 / a.fps);
  if (!a.gt.empty()) {
    config.num_frames = read_coco_ground_truth(a.gt, config.frame_interval)
                            .stream.config.num_frames;
  } else if (a.num_frames > 0) {
    config.num_frames = a.num_frames;
  } else {
    throw ConfigError("mismatch needs --gt or --num-frames");
  }
  config.downstream_latency = a.eta;
  const MismatchSeries m = temporal_mismatch(outputs, config, parse_pairing_mode(a.pairing));
  emit_json({{"mean", m.mean},
             {"mean_answered", m.mean_answered},
             {"max", m.max},
             {"unanswered", m.unanswered},
             {"deltas", m.deltas}},
            a.report);
  return 0;
}

int cmd_sweep(const SweepArgs& a) {
  const fs::path spec_path(a.spec);
  const SweepSpec spec = parse_sweep_spec(read_json_file(spec_path), spec_path.parent_path());
  const auto rows = run_sweep(spec, a.jobs);
  if (a.out.empty() || a.out == "-") {
    write_sweep_csv(std::cout, rows);
  } else {
    auto out = open_output(a.out);
    write_sweep_csv(out, rows);
  }
  return 0;
}

int cmd_synth(const SynthArgs& a) {
  if (!(a.fps > 0.0)) throw DomainError("--fps must be > 0");
  SceneSpec scene;
  scene.num_objects = a.objects;
  scene.num_frames = a.frames;
  scene.frame_interval = 1.0 / a.fps;
  scene.motion.kind = parse_motion_kind(a.motion);
  scene.motion.max_speed = a.max_speed;
  scene.motion.max_accel = a.max_accel;
  scene.motion.sigma = a.sigma;
  scene.image_width = a.width;
  scene.image_height = a.height;
  scene.min_size = a.min_size;
  scene.max_size = a.max_size;
  scene.classes = a.classes;
  scene.seed = a.seed;
  const GroundTruthStream gt = gen_scene(scene);

  DegradeSpec degrade_spec;
  degrade_spec.box_noise = a.noise;
  degrade_spec.drop_rate = a.drop;
  if (a.score == "jitter") {
    degrade_spec.score = ScoreModel::kJitter;
  } else if (a.score == "constant") {
    degrade_spec.score = ScoreModel::kConstant;
  } else {
    throw ConfigError("unknown score model '" + a.score + "'");
  }
  degrade_spec.seed = a.seed + 1;
  const DetectionSet dets = degrade(gt, degrade_spec);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_json_file(dir / "gt.json", coco_ground_truth_json(gt));
  write_json_file(dir / "detections.json", coco_detections_json(dets));
  if (a.runtime_ms > 0.0) {
    std::vector<double> samples;
    if (a.runtime_spread > 0.0) {
      Rng rng(a.seed + 2);
      std::lognormal_distribution<double> dist(std::log(a.runtime_ms * 1e-3), a.runtime_spread);
      for (int i = 0; i < a.runtime_samples; ++i) samples.push_back(dist(rng));
    } else {
      samples.push_back(a.runtime_ms * 1e-3);
    }
    write_json_file(dir / "profile.json",
                    profiles_json({RuntimeProfile(kDetectorModule, std::move(samples))}));
  }
  return 0;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--gt", a.gt, "COCO ground-truth file")->required();
  cmd->add_option("--detections", a.detections, "COCO detection results")->required();
  cmd->add_option("--profile", a.profile, "runtime profile JSON")->required();
  cmd->add_option("--manifest", a.manifest, "sequence manifest (supplies fps)");
  cmd->add_option("--sequence", a.sequence, "sequence name within the manifest");
  cmd->add_option("--fps", a.fps, "frame rate")->capture_default_str();
  cmd->add_option("--scale", a.scales, "module=factor runtime scaling (repeatable)");
  cmd->add_option("--policy", a.policy,
                  "default | idlefree | shrinking-tail | stride:N")->capture_default_str();
  cmd->add_option("--runtime-estimate", a.runtime_estimate, "mean | ema:ALPHA")
      ->capture_default_str();
  cmd->add_option("--compute", a.compute, "single | infinite")->capture_default_str();
  cmd->add_option("--tracker", a.tracker, "ideal | hold-last")->capture_default_str();
  cmd->add_option("--min-iou", a.min_iou, "association IoU threshold")->capture_default_str();
  cmd->add_option("--kf-r", a.kf_r, "Kalman measurement noise diagonal (1 or 4 values)");
  cmd->add_option("--kf-p0", a.kf_p0, "Kalman initial covariance (2 or 8 values)");
  cmd->add_option("--keep-unmatched", a.keep_unmatched, "results an unmatched track survives");
  cmd->add_option("--eta", a.eta, "downstream latency in seconds")->capture_default_str();
  cmd->add_option("--seed", a.seed, "random seed")->envname("STREAMBENCH_SEED");
  cmd->add_option("--report", a.report, "report JSON path (default stdout)");
  cmd->add_option("--trace", a.trace, "trace CSV path");
  cmd->add_option("--summary", a.summary, "trace summary JSON path");
  cmd->add_option("--outputs", a.outputs, "write the output stream JSON here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming perception benchmark"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);

  RunArgs stream_args;
  auto* stream = app.add_subcommand("stream", "Run the streamer and evaluate it");
  add_run_options(stream, stream_args);
  stream->add_option("--forecast", stream_args.forecast, "none | linear | quadratic | kalman");

  RunArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Simulate the detector without forecasting");
  add_run_options(simulate, sim_args);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a stored output stream");
  eval->add_option("--gt", eval_args.gt, "COCO ground-truth file")->required();
  eval->add_option("--outputs", eval_args.outputs, "output stream JSON");
  eval->add_option("--detections", eval_args.detections, "offline detections instead");
  eval->add_option("--fps", eval_args.fps)->capture_default_str();
  eval->add_option("--eta", eval_args.eta)->capture_default_str();
  eval->add_option("--pairing", eval_args.pairing, "strict-before | at-or-before")
      ->capture_default_str();
  eval->add_option("--report", eval_args.report, "report JSON path (default stdout)");

  MismatchArgs mm_args;
  auto* mismatch = app.add_subcommand("mismatch", "Temporal mismatch of an output stream");
  mismatch->add_option("--outputs", mm_args.outputs, "output stream JSON")->required();
  mismatch->add_option("--gt", mm_args.gt, "ground truth (supplies the frame count)");
  mismatch->add_option("--num-frames", mm_args.num_frames);
  mismatch->add_option("--fps", mm_args.fps)->capture_default_str();
  mismatch->add_option("--eta", mm_args.eta)->capture_default_str();
  mismatch->add_option("--pairing", mm_args.pairing)->capture_default_str();
  mismatch->add_option("--report", mm_args.report, "JSON path (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of configurations");
  sweep->add_option("--spec", sweep_args.spec, "sweep JSON")->required();
  sweep->add_option("--jobs", sweep_args.jobs, "parallel cells")->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "CSV path (default stdout)");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic fixture");
  synth->add_option("--out-dir", syn.out_dir)->required();
  synth->add_option("--objects", syn.objects)->capture_default_str();
  synth->add_option("--frames", syn.frames)->capture_default_str();
  synth->add_option("--fps", syn.fps)->capture_default_str();
  synth->add_option("--motion", syn.motion, "constant-velocity | quadratic | random-walk")
      ->capture_default_str();
  synth->add_option("--max-speed", syn.max_speed, "px/frame")->capture_default_str();
  synth->add_option("--max-accel", syn.max_accel, "px/frame^2")->capture_default_str();
  synth->add_option("--sigma", syn.sigma, "random-walk step, px/frame")->capture_default_str();
  synth->add_option("--min-size", syn.min_size)->capture_default_str();
  synth->add_option("--max-size", syn.max_size)->capture_default_str();
  synth->add_option("--width", syn.width)->capture_default_str();
  synth->add_option("--height", syn.height)->capture_default_str();
  synth->add_option("--classes", syn.classes)->capture_default_str();
  synth->add_option("--noise", syn.noise, "detection box noise sigma, px")->capture_default_str();
  synth->add_option("--drop", syn.drop, "detection drop rate")->capture_default_str();
  synth->add_option("--score", syn.score, "jitter | constant")->capture_default_str();
  synth->add_option("--runtime-ms", syn.runtime_ms, "write a detector profile with this runtime");
  synth->add_option("--runtime-spread", syn.runtime_spread, "log-normal sigma (0: constant)");
  synth->add_option("--runtime-samples", syn.runtime_samples)->capture_default_str();
  synth->add_option("--seed", syn.seed)->envname("STREAMBENCH_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*stream) return cmd_run(stream_args, true);
    if (*simulate) return cmd_run(sim_args, false);
    if (*eval) return cmd_eval(eval_args);
    if (*mismatch) return cmd_mismatch(mm_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*synth) return cmd_synth(syn);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
