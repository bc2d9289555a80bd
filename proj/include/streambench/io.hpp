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
// File formats.
//
//  * Ground truth: COCO annotation file. The images array is ordered by
//    frame; categories define the class set.
//  * Detections: COCO result list keyed by image_id.
//  * Manifest: {"sequences": [{"name", "num_frames", "fps", "width",
//    "height"}]}.
//  * Profiles: {"modules": [{"name", "unit": "ms"|"s", "samples": [...],
//    "scale"}]}; a module may instead give "kind": "constant" with "value" or
//    "kind": "uniform" with "lo"/"hi", in the same unit.
//  * Output stream: {"frame_interval", "records": [{"timestamp",
//    "input_index", "producer", "boxes": [{"bbox", "category_id", "score",
//    "track_id"}]}]}.
//  * Trace: CSV module,start_s,end_s,input_index,device_id.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "streambench/core.hpp"
#include "streambench/evalmetrics.hpp"
#include "streambench/profiles.hpp"
#include "streambench/simulator.hpp"

namespace streambench {

using Json = nlohmann::json;

// Throws InputError naming the path when it cannot be read or parsed.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

struct CocoGroundTruth {
  GroundTruthStream stream;
  std::vector<std::int64_t> image_ids;  // image id of each frame
  std::map<int, std::string> category_names;
};

CocoGroundTruth parse_coco_ground_truth(const Json& doc, double frame_interval,
                                        const std::string& source = "<memory>");
CocoGroundTruth read_coco_ground_truth(const std::filesystem::path& path,
                                       double frame_interval = 1.0 / 30.0);
Json coco_ground_truth_json(const GroundTruthStream& gt,
                            const std::map<int, std::string>& category_names = {});

DetectionSet parse_coco_detections(const Json& doc, const CocoGroundTruth& reference,
                                   const std::string& source = "<memory>");
DetectionSet read_coco_detections(const std::filesystem::path& path,
                                  const CocoGroundTruth& reference);
// Image ids default to 1..T.
Json coco_detections_json(const DetectionSet& detections,
                          const std::vector<std::int64_t>& image_ids = {});

struct SequenceInfo {
  std::string name;
  int num_frames = 0;
  double fps = 30.0;
  int width = 0;
  int height = 0;
};

std::vector<SequenceInfo> read_manifest(const std::filesystem::path& path);
Json manifest_json(const std::vector<SequenceInfo>& sequences);

ProfileSet parse_profiles(const Json& doc, const std::string& source = "<memory>");
ProfileSet read_profiles(const std::filesystem::path& path);
// Writes empirical profiles in milliseconds.
Json profiles_json(const std::vector<RuntimeProfile>& profiles);

Json output_stream_json(const OutputStream& stream, double frame_interval);
OutputStream parse_output_stream(const Json& doc, const std::string& source = "<memory>");

void write_trace_csv(std::ostream& os, const ScheduleTrace& trace);
Json trace_summary_json(const ScheduleTrace& trace);

Json report_json(const EvalReport& report);

struct LoadedInputs {
  CocoGroundTruth gt;
  DetectionSet detections;
  ProfileSet profiles;
};

LoadedInputs load_inputs(const std::filesystem::path& gt,
                         const std::filesystem::path& detections,
                         const std::filesystem::path& profiles, double frame_interval);

}  // namespace streambench
