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
#include <sstream>
#include <string>

#include "doctest.h"
#include "streambench/error.hpp"
#include "streambench/sweep.hpp"
#include "support/helpers.hpp"

using namespace streambench;
using streambench::testing::data_path;

namespace {

SweepInput synth_input(const std::string& name, const std::string& profile) {
  SweepInput in;
  in.name = name;
  in.gt = data_path("synth/gt.json");
  in.detections = data_path("synth/detections_clean.json");
  in.profile = data_path(profile);
  return in;
}

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_sweep_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("grid has one row per cell in grid order") {
  SweepSpec spec;
  spec.inputs = {synth_input("const", "synth/profile_constant.json"),
                 synth_input("emp", "synth/profile_empirical.json")};
  spec.policies = {"idlefree", "shrinking-tail"};
  const auto rows = run_sweep(spec, 2);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].input == "const");
  CHECK(rows[0].policy == "idlefree");
  CHECK(rows[1].policy == "shrinking-tail");
  CHECK(rows[3].input == "emp");
  for (int i = 0; i < 4; ++i) {
    CHECK(rows[i].config_id == i);
    CHECK(rows[i].status == "ok");
    CHECK(rows[i].report.has_value());
  }
}

TEST_CASE("empty grid yields the header only") {
  SweepSpec spec;
  spec.inputs = {synth_input("a", "synth/profile_constant.json")};
  spec.forecasts = {};
  const auto rows = run_sweep(spec);
  CHECK(rows.empty());
  CHECK(csv(rows) ==
        "config_id,input,policy,compute,forecast,scale,AP,AP50,AP75,AP_S,AP_M,AP_L,"
        "mismatch_mean,mismatch_max,max_concurrency,status\n");
  CHECK(run_sweep(SweepSpec{}).empty());
}

TEST_CASE("forecasting raises AP on the synthetic fixture") {
  SweepSpec spec;
  spec.inputs = {synth_input("a", "synth/profile_constant.json")};
  spec.forecasts = {"none", "kalman"};
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 2);
  CHECK(*rows[1].report->ap.ap > *rows[0].report->ap.ap);
}

TEST_CASE("failing cells become error rows and the sweep continues") {
  SweepSpec spec;
  spec.inputs = {synth_input("missing", "synth/no_such_profile.json"),
                 synth_input("ok", "synth/profile_constant.json")};
  spec.policies = {"default", "bogus"};
  const auto rows = run_sweep(spec, 3);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].status.starts_with("error: "));
  CHECK(rows[0].status.find("no_such_profile.json") != std::string::npos);
  CHECK(rows[1].status.starts_with("error: "));
  CHECK(rows[2].status == "ok");
  CHECK(rows[3].status.starts_with("error: "));
  CHECK_FALSE(rows[3].report.has_value());
  const std::string text = csv(rows);
  CHECK(text.find("2,ok,default,single,none,1,") != std::string::npos);
}

TEST_CASE("rows do not depend on the number of workers") {
  SweepSpec spec;
  spec.inputs = {synth_input("emp", "synth/profile_empirical.json")};
  spec.policies = {"idlefree", "shrinking-tail", "stride:3"};
  spec.forecasts = {"none", "linear"};
  spec.scales = {1.0, 0.5};
  spec.seed = 11;
  const std::string serial = csv(run_sweep(spec, 1));
  CHECK(csv(run_sweep(spec, 5)) == serial);
  CHECK(csv(run_sweep(spec, 64)) == serial);
}

TEST_CASE("sweep documents resolve paths and apply defaults") {
  const Json doc = Json::parse(R"({
    "inputs": [{"gt": "g.json", "detections": "sub/d.json", "profile": "/abs/p.json"}],
    "forecasts": ["none", "kalman"], "eta": 0.02, "seed": 4
  })");
  const SweepSpec spec = parse_sweep_spec(doc, "/base");
  REQUIRE(spec.inputs.size() == 1);
  CHECK(spec.inputs[0].gt == std::filesystem::path("/base/g.json"));
  CHECK(spec.inputs[0].detections == std::filesystem::path("/base/sub/d.json"));
  CHECK(spec.inputs[0].profile == std::filesystem::path("/abs/p.json"));
  CHECK(spec.inputs[0].name == "d");
  CHECK(spec.policies == std::vector<std::string>{"default"});
  CHECK(spec.forecasts.size() == 2);
  CHECK(spec.eta == 0.02);
  CHECK(spec.seed == 4);
  CHECK_THROWS_AS(parse_sweep_spec(Json::parse(R"({"inputs": [{"gt": 1}]})"), "/"), InputError);
}
