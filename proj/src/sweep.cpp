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
#include "streambench/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <ostream>
#include <thread>

#include "streambench/benchmark.hpp"
#include "streambench/error.hpp"

namespace streambench {

namespace {

struct Cell {
  std::size_t input;
  std::string policy;
  std::string compute;
  std::string forecast;
  double scale;
};

struct InputData {
  std::shared_ptr<const LoadedInputs> loaded;
  std::string error;
};

SweepRow run_cell(const SweepSpec& spec, const Cell& cell, const InputData& data, int id) {
  SweepRow row;
  row.config_id = id;
  row.input = spec.inputs[cell.input].name;
  row.policy = cell.policy;
  row.compute = cell.compute;
  row.forecast = cell.forecast;
  row.scale = cell.scale;
  if (!data.loaded) {
    row.status = "error: " + data.error;
    return row;
  }
  try {
    BenchmarkSetup setup;
    setup.gt = data.loaded->gt.stream;
    setup.gt.config.downstream_latency = spec.eta;
    setup.detections = data.loaded->detections;
    setup.profiles = data.loaded->profiles;
    if (cell.scale != 1.0) setup.profiles.scale(kDetectorModule, cell.scale);
    const ComputeKind compute = parse_compute_kind(cell.compute);
    setup.options.simulation.compute = compute;
    setup.options.simulation.policy =
        cell.policy == "default" ? default_policy(compute) : parse_policy(cell.policy);
    setup.options.forecast.method = parse_forecast_method(cell.forecast);
    row.report = run_benchmark(setup, spec.seed).report;
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

SweepSpec parse_sweep_spec(const Json& doc, const std::filesystem::path& base_dir) {
  SweepSpec spec;
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    for (const auto& in : doc.value("inputs", Json::array())) {
      SweepInput input;
      input.gt = resolve(in.at("gt").get<std::string>());
      input.detections = resolve(in.at("detections").get<std::string>());
      input.profile = resolve(in.at("profile").get<std::string>());
      input.name = in.value("name", input.detections.stem().string());
      input.fps = in.value("fps", 30.0);
      spec.inputs.push_back(std::move(input));
    }
    if (doc.contains("policies")) spec.policies = doc["policies"].get<std::vector<std::string>>();
    if (doc.contains("computes")) spec.computes = doc["computes"].get<std::vector<std::string>>();
    if (doc.contains("forecasts")) {
      spec.forecasts = doc["forecasts"].get<std::vector<std::string>>();
    }
    if (doc.contains("scales")) spec.scales = doc["scales"].get<std::vector<double>>();
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.eta = doc.value("eta", 0.0);
  } catch (const Json::exception& e) {
    throw InputError(std::string("sweep specification: ") + e.what());
  }
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    for (const auto& policy : spec.policies) {
      for (const auto& compute : spec.computes) {
        for (const auto& forecast : spec.forecasts) {
          for (double scale : spec.scales) {
            cells.push_back({i, policy, compute, forecast, scale});
          }
        }
      }
    }
  }
  if (cells.empty()) return {};

  std::vector<InputData> inputs(spec.inputs.size());
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    const auto& in = spec.inputs[i];
    try {
      inputs[i].loaded = std::make_shared<const LoadedInputs>(
          load_inputs(in.gt, in.detections, in.profile, 1.0 / in.fps));
    } catch (const std::exception& e) {
      inputs[i].error = e.what();
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      rows[c] = run_cell(spec, cells[c], inputs[cells[c].input], static_cast<int>(c));
    }
  };
  const int n = std::clamp(jobs, 1, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "config_id,input,policy,compute,forecast,scale,AP,AP50,AP75,AP_S,AP_M,AP_L,"
        "mismatch_mean,mismatch_max,max_concurrency,status\n";
  const auto old_precision = os.precision(10);
  const auto num = [&](const std::optional<double>& v) {
    if (v) os << *v;
  };
  for (const auto& r : rows) {
    os << r.config_id << ',' << csv_escape(r.input) << ',' << csv_escape(r.policy) << ','
       << csv_escape(r.compute) << ',' << csv_escape(r.forecast) << ',' << r.scale << ',';
    if (r.report) {
      const auto& ap = r.report->ap;
      num(ap.ap);
      os << ',';
      num(ap.ap50);
      os << ',';
      num(ap.ap75);
      os << ',';
      num(ap.ap_small);
      os << ',';
      num(ap.ap_medium);
      os << ',';
      num(ap.ap_large);
      os << ',' << r.report->mismatch_mean << ',' << r.report->mismatch_max << ','
         << r.report->max_concurrency.value_or(0) << ',';
    } else {
      os << ",,,,,,,,,";
    }
    os << csv_escape(r.status) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace streambench
