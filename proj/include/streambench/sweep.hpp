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
// Grid sweeps over inputs x policies x compute models x forecasters x
// detector scales. A sweep document looks like
//
//   {
//     "inputs": [{"name": "a", "gt": "gt.json", "detections": "det.json",
//                 "profile": "profile.json", "fps": 30}],
//     "policies": ["idlefree", "shrinking-tail", "stride:5"],
//     "computes": ["single"],
//     "forecasts": ["none", "kalman"],
//     "scales": [1.0],
//     "seed": 0,
//     "eta": 0.0
//   }
//
// Relative paths resolve against the document's directory. Missing grid
// keys take a one-element default; an explicitly empty list yields no cells.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "streambench/evalmetrics.hpp"
#include "streambench/io.hpp"

namespace streambench {

struct SweepInput {
  std::string name;
  std::filesystem::path gt;
  std::filesystem::path detections;
  std::filesystem::path profile;
  double fps = 30.0;
};

struct SweepSpec {
  std::vector<SweepInput> inputs;
  std::vector<std::string> policies = {"default"};
  std::vector<std::string> computes = {"single"};
  std::vector<std::string> forecasts = {"none"};
  std::vector<double> scales = {1.0};
  std::uint64_t seed = 0;
  double eta = 0.0;
};

SweepSpec parse_sweep_spec(const Json& doc, const std::filesystem::path& base_dir);

struct SweepRow {
  int config_id = 0;
  std::string input;
  std::string policy;
  std::string compute;
  std::string forecast;
  double scale = 1.0;
  std::optional<EvalReport> report;
  std::string status = "ok";  // error message for failed cells
};

// Runs every cell, up to `jobs` at a time. A failing cell becomes an error
// row; rows come back in grid order regardless of completion order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace streambench
