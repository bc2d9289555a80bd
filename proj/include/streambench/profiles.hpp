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
// Empirical runtime distributions of pipeline modules. Runtimes are sampled
// i.i.d. with replacement at every job launch; temporal correlation between
// consecutive invocations is not modeled.
#pragma once

#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace streambench {

using Rng = std::mt19937_64;

// Standard module names looked up by the simulator and the streamer.
inline constexpr const char* kDetectorModule = "detector";
inline constexpr const char* kTrackerModule = "tracker";
inline constexpr const char* kAssociationModule = "association";
inline constexpr const char* kForecastModule = "forecast";

class RuntimeProfile {
 public:
  // Samples are in seconds. Throws DomainError on an empty list, a
  // non-positive sample or a non-positive scale.
  RuntimeProfile(std::string module_name, std::vector<double> samples,
                 double scale = 1.0);

  const std::string& module_name() const { return module_name_; }
  const std::vector<double>& raw_samples() const { return samples_; }
  double scale() const { return scale_; }

  // raw * scale for every sample.
  std::vector<double> effective_samples() const;
  double effective(std::size_t i) const { return samples_[i] * scale_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::string module_name_;
  std::vector<double> samples_;
  double scale_;
};

// Returns a copy with every effective sample multiplied by factor.
RuntimeProfile scale_profile(const RuntimeProfile& profile, double factor);

struct ProfileStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double relative_std = 0.0;
  double min = 0.0;
  double max = 0.0;
  // Equal-width bins over [min, max]; the last bin is closed on the right.
  std::vector<std::size_t> histogram;
  double bin_width = 0.0;
};

ProfileStats profile_stats(const RuntimeProfile& profile, std::size_t bins = 50);

struct ConstantRuntime {
  double seconds;
};

struct UniformRuntime {
  double lo;
  double hi;
};

class RuntimeModel {
 public:
  using Kind = std::variant<RuntimeProfile, ConstantRuntime, UniformRuntime>;

  static RuntimeModel empirical(RuntimeProfile profile);
  static RuntimeModel constant(double seconds);
  static RuntimeModel uniform(double lo, double hi);

  const Kind& kind() const { return kind_; }
  double mean() const;
  double max() const;
  // Same model with every runtime multiplied by factor.
  RuntimeModel scaled(double factor) const;
  std::string describe() const;

 private:
  explicit RuntimeModel(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

double sample_runtime(const RuntimeModel& model, Rng& rng);

// Named runtime models for the modules of one pipeline. Modules without an
// entry fall back to zero cost when queried through runtime_or_zero().
class ProfileSet {
 public:
  void set(const std::string& module, RuntimeModel model);
  bool contains(const std::string& module) const;
  // Throws ConfigError when the module has no profile.
  const RuntimeModel& at(const std::string& module) const;
  const RuntimeModel* find(const std::string& module) const;
  // Multiplies the named module's runtimes by factor. Throws ConfigError when
  // the module is missing and DomainError for factor <= 0.
  void scale(const std::string& module, double factor);
  const std::map<std::string, RuntimeModel>& models() const { return models_; }

 private:
  std::map<std::string, RuntimeModel> models_;
};

}  // namespace streambench
