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
#include "streambench/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "streambench/error.hpp"

namespace streambench {

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& what) {
  throw InputError(source + ": " + what);
}

BoundingBox box_from_json(const Json& rec, const std::string& source,
                          const std::string& where) {
  try {
    const auto& bbox = rec.at("bbox");
    if (!bbox.is_array() || bbox.size() != 4) fail(source, where + ": bbox must have 4 numbers");
    BoundingBox b;
    b.x = bbox[0].get<double>();
    b.y = bbox[1].get<double>();
    b.w = bbox[2].get<double>();
    b.h = bbox[3].get<double>();
    b.class_id = rec.at("category_id").get<int>();
    b.score = rec.value("score", 1.0);
    if (rec.contains("track_id") && !rec["track_id"].is_null()) {
      b.track_id = rec["track_id"].get<std::int64_t>();
    }
    if (rec.contains("iscrowd")) {
      const auto& c = rec["iscrowd"];
      b.iscrowd = c.is_boolean() ? c.get<bool>() : c.get<int>() != 0;
    }
    if (b.w < 0 || b.h < 0) fail(source, where + ": negative box extent");
    if (!(b.score >= 0.0 && b.score <= 1.0)) fail(source, where + ": score outside [0, 1]");
    return b;
  } catch (const Json::exception& e) {
    fail(source, where + ": " + e.what());
  }
}

Json box_to_json(const BoundingBox& b) {
  Json j = {{"bbox", {b.x, b.y, b.w, b.h}}, {"category_id", b.class_id}, {"score", b.score}};
  if (b.track_id) j["track_id"] = *b.track_id;
  return j;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

CocoGroundTruth parse_coco_ground_truth(const Json& doc, double frame_interval,
                                        const std::string& source) {
  CocoGroundTruth out;
  try {
    const auto& images = doc.at("images");
    const auto& annotations = doc.at("annotations");
    const auto& categories = doc.at("categories");
    if (images.empty()) fail(source, "no images");

    std::unordered_map<std::int64_t, std::size_t> frame_of;
    for (std::size_t i = 0; i < images.size(); ++i) {
      const auto id = images[i].at("id").get<std::int64_t>();
      if (!frame_of.emplace(id, i).second) {
        fail(source, "image #" + std::to_string(i) + ": duplicate id " + std::to_string(id));
      }
      out.image_ids.push_back(id);
    }
    for (const auto& c : categories) {
      const int id = c.at("id").get<int>();
      out.category_names[id] = c.value("name", std::to_string(id));
      out.stream.classes.push_back(id);
    }
    std::sort(out.stream.classes.begin(), out.stream.classes.end());

    auto& gt = out.stream;
    gt.frames.resize(images.size());
    gt.image_width = images[0].value("width", 0);
    gt.image_height = images[0].value("height", 0);
    gt.config.frame_interval = frame_interval;
    gt.config.num_frames = static_cast<int>(images.size());

    for (std::size_t a = 0; a < annotations.size(); ++a) {
      const auto& rec = annotations[a];
      const std::string where = "annotation #" + std::to_string(a);
      const auto image_id = rec.at("image_id").get<std::int64_t>();
      const auto it = frame_of.find(image_id);
      if (it == frame_of.end()) {
        fail(source, where + ": unknown image_id " + std::to_string(image_id));
      }
      BoundingBox b = box_from_json(rec, source, where);
      b.score = 1.0;
      if (!gt.has_class(b.class_id)) {
        fail(source, where + ": category " + std::to_string(b.class_id) + " not declared");
      }
      gt.frames[it->second].push_back(b);
    }
  } catch (const Json::exception& e) {
    fail(source, e.what());
  }
  return out;
}

CocoGroundTruth read_coco_ground_truth(const std::filesystem::path& path,
                                       double frame_interval) {
  return parse_coco_ground_truth(read_json_file(path), frame_interval, path.string());
}

Json coco_ground_truth_json(const GroundTruthStream& gt,
                            const std::map<int, std::string>& category_names) {
  Json images = Json::array();
  Json annotations = Json::array();
  Json categories = Json::array();
  std::int64_t ann_id = 1;
  for (std::size_t f = 0; f < gt.frames.size(); ++f) {
    const auto image_id = static_cast<std::int64_t>(f + 1);
    images.push_back({{"id", image_id},
                      {"file_name", "frame_" + std::to_string(f + 1) + ".jpg"},
                      {"width", gt.image_width},
                      {"height", gt.image_height}});
    for (const auto& b : gt.frames[f]) {
      Json a = {{"id", ann_id++},
                {"image_id", image_id},
                {"category_id", b.class_id},
                {"bbox", {b.x, b.y, b.w, b.h}},
                {"area", b.area()},
                {"iscrowd", b.iscrowd ? 1 : 0}};
      if (b.track_id) a["track_id"] = *b.track_id;
      annotations.push_back(std::move(a));
    }
  }
  for (int c : gt.classes) {
    const auto it = category_names.find(c);
    categories.push_back(
        {{"id", c}, {"name", it != category_names.end() ? it->second : "class" + std::to_string(c)}});
  }
  return {{"images", images}, {"annotations", annotations}, {"categories", categories}};
}

DetectionSet parse_coco_detections(const Json& doc, const CocoGroundTruth& reference,
                                   const std::string& source) {
  if (!doc.is_array()) fail(source, "expected a list of detections");
  std::unordered_map<std::int64_t, std::size_t> frame_of;
  for (std::size_t i = 0; i < reference.image_ids.size(); ++i) {
    frame_of.emplace(reference.image_ids[i], i);
  }
  DetectionSet out;
  out.frames.resize(reference.image_ids.size());
  for (std::size_t d = 0; d < doc.size(); ++d) {
    const std::string where = "detection #" + std::to_string(d);
    try {
      const auto image_id = doc[d].at("image_id").get<std::int64_t>();
      const auto it = frame_of.find(image_id);
      if (it == frame_of.end()) {
        fail(source, where + ": unknown image_id " + std::to_string(image_id));
      }
      BoundingBox b = box_from_json(doc[d], source, where);
      if (!reference.stream.has_class(b.class_id)) {
        fail(source, where + ": category " + std::to_string(b.class_id) +
                         " not in the ground-truth class set");
      }
      out.frames[it->second].push_back(b);
    } catch (const Json::exception& e) {
      fail(source, where + ": " + e.what());
    }
  }
  return out;
}

DetectionSet read_coco_detections(const std::filesystem::path& path,
                                  const CocoGroundTruth& reference) {
  return parse_coco_detections(read_json_file(path), reference, path.string());
}

Json coco_detections_json(const DetectionSet& detections,
                          const std::vector<std::int64_t>& image_ids) {
  Json out = Json::array();
  for (std::size_t f = 0; f < detections.frames.size(); ++f) {
    const std::int64_t image_id =
        image_ids.empty() ? static_cast<std::int64_t>(f + 1) : image_ids.at(f);
    for (const auto& b : detections.frames[f]) {
      Json j = box_to_json(b);
      j["image_id"] = image_id;
      out.push_back(std::move(j));
    }
  }
  return out;
}

std::vector<SequenceInfo> read_manifest(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  std::vector<SequenceInfo> out;
  try {
    const auto& seqs = doc.at("sequences");
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      SequenceInfo s;
      s.name = seqs[i].at("name").get<std::string>();
      s.num_frames = seqs[i].at("num_frames").get<int>();
      s.fps = seqs[i].value("fps", 30.0);
      s.width = seqs[i].value("width", 0);
      s.height = seqs[i].value("height", 0);
      if (s.num_frames < 1 || !(s.fps > 0.0)) {
        fail(path.string(), "sequence #" + std::to_string(i) + ": invalid frame count or fps");
      }
      out.push_back(std::move(s));
    }
  } catch (const Json::exception& e) {
    fail(path.string(), e.what());
  }
  return out;
}

Json manifest_json(const std::vector<SequenceInfo>& sequences) {
  Json seqs = Json::array();
  for (const auto& s : sequences) {
    seqs.push_back({{"name", s.name},
                    {"num_frames", s.num_frames},
                    {"fps", s.fps},
                    {"width", s.width},
                    {"height", s.height}});
  }
  return {{"sequences", seqs}};
}

ProfileSet parse_profiles(const Json& doc, const std::string& source) {
  const Json& modules = doc.is_array() ? doc : doc.contains("modules") ? doc["modules"] : doc;
  if (!modules.is_array()) fail(source, "expected a list of module profiles");
  ProfileSet set;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const std::string where = "module #" + std::to_string(i);
    try {
      const auto& m = modules[i];
      const auto name = m.at("name").get<std::string>();
      const auto unit = m.value("unit", std::string("ms"));
      double to_seconds = 1e-3;
      if (unit == "s") {
        to_seconds = 1.0;
      } else if (unit != "ms") {
        fail(source, where + ": unknown unit '" + unit + "'");
      }
      const double scale = m.value("scale", 1.0);
      const auto kind = m.value("kind", std::string("empirical"));
      RuntimeModel model = [&] {
        if (kind == "constant") {
          return RuntimeModel::constant(m.at("value").get<double>() * to_seconds);
        }
        if (kind == "uniform") {
          return RuntimeModel::uniform(m.at("lo").get<double>() * to_seconds,
                                       m.at("hi").get<double>() * to_seconds);
        }
        if (kind != "empirical") fail(source, where + ": unknown kind '" + kind + "'");
        std::vector<double> samples = m.at("samples").get<std::vector<double>>();
        for (double& s : samples) s *= to_seconds;
        return RuntimeModel::empirical(RuntimeProfile(name, std::move(samples)));
      }();
      if (scale != 1.0) model = model.scaled(scale);
      set.set(name, std::move(model));
    } catch (const Json::exception& e) {
      fail(source, where + ": " + e.what());
    } catch (const DomainError& e) {
      fail(source, where + ": " + e.what());
    }
  }
  return set;
}

ProfileSet read_profiles(const std::filesystem::path& path) {
  return parse_profiles(read_json_file(path), path.string());
}

Json profiles_json(const std::vector<RuntimeProfile>& profiles) {
  Json modules = Json::array();
  for (const auto& p : profiles) {
    std::vector<double> ms;
    for (double s : p.raw_samples()) ms.push_back(s * 1e3);
    modules.push_back(
        {{"name", p.module_name()}, {"unit", "ms"}, {"samples", ms}, {"scale", p.scale()}});
  }
  return {{"modules", modules}};
}

Json output_stream_json(const OutputStream& stream, double frame_interval) {
  Json records = Json::array();
  for (const auto& r : stream.records) {
    Json boxes = Json::array();
    for (const auto& b : r.prediction) boxes.push_back(box_to_json(b));
    records.push_back({{"timestamp", r.timestamp},
                       {"input_index", r.input_index},
                       {"producer", std::string(to_string(r.producer))},
                       {"boxes", boxes}});
  }
  return {{"frame_interval", frame_interval}, {"records", records}};
}

OutputStream parse_output_stream(const Json& doc, const std::string& source) {
  OutputStream out;
  try {
    const auto& records = doc.at("records");
    for (std::size_t j = 0; j < records.size(); ++j) {
      const std::string where = "record #" + std::to_string(j);
      const auto& r = records[j];
      OutputRecord rec;
      rec.timestamp = r.at("timestamp").get<double>();
      rec.input_index = r.at("input_index").get<int>();
      rec.producer = parse_producer(r.value("producer", std::string("detector")));
      const auto& boxes = r.at("boxes");
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        rec.prediction.push_back(
            box_from_json(boxes[b], source, where + " box #" + std::to_string(b)));
      }
      out.records.push_back(std::move(rec));
    }
  } catch (const Json::exception& e) {
    fail(source, e.what());
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.starts_with(source)) throw;
    fail(source, msg);
  }
  if (!out.is_sorted()) fail(source, "record timestamps are not non-decreasing");
  return out;
}

void write_trace_csv(std::ostream& os, const ScheduleTrace& trace) {
  os << "module,start_s,end_s,input_index,device_id\n";
  const auto old_precision = os.precision(17);
  for (const auto& b : trace.blocks) {
    os << b.module << ',' << b.start << ',' << b.end << ',' << b.input_index << ','
       << b.device_id << '\n';
  }
  os.precision(old_precision);
}

Json trace_summary_json(const ScheduleTrace& trace) {
  Json counts = Json::object();
  for (const auto& [module, n] : trace.block_counts()) counts[module] = n;
  return {{"max_concurrency", trace.max_concurrency}, {"block_counts", counts}};
}

Json report_json(const EvalReport& report) {
  const auto opt = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  Json per_class = Json::object();
  for (const auto& [c, ap] : report.ap.per_class) per_class[std::to_string(c)] = opt(ap);
  Json j = {{"AP", opt(report.ap.ap)},
            {"AP50", opt(report.ap.ap50)},
            {"AP75", opt(report.ap.ap75)},
            {"AP_S", opt(report.ap.ap_small)},
            {"AP_M", opt(report.ap.ap_medium)},
            {"AP_L", opt(report.ap.ap_large)},
            {"per_class_AP", per_class},
            {"mismatch_mean", report.mismatch_mean},
            {"mismatch_max", report.mismatch_max},
            {"unanswered_queries", report.unanswered_queries},
            {"num_queries", report.num_queries},
            {"num_records", report.num_records},
            {"notes", report.notes}};
  j["max_concurrency"] =
      report.max_concurrency ? Json(*report.max_concurrency) : Json(nullptr);
  return j;
}

LoadedInputs load_inputs(const std::filesystem::path& gt,
                         const std::filesystem::path& detections,
                         const std::filesystem::path& profiles, double frame_interval) {
  LoadedInputs in;
  in.gt = read_coco_ground_truth(gt, frame_interval);
  in.detections = read_coco_detections(detections, in.gt);
  in.profiles = read_profiles(profiles);
  return in;
}

}  // namespace streambench
