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
#include "streambench/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "streambench/error.hpp"

namespace streambench {

namespace {

void check_factor(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DomainError("scale factor must be positive, got " + std::to_string(factor));
  }
}

}  // namespace

RuntimeProfile::RuntimeProfile(std::string module_name, std::vector<double> samples,
                               double scale)
    : module_name_(std::move(module_name)), samples_(std::move(samples)), scale_(scale) {
  if (samples_.empty()) {
    throw DomainError("runtime profile '" + module_name_ + "' has no samples");
  }
  for (double s : samples_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw DomainError("runtime profile '" + module_name_ +
                        "' has a non-positive sample");
    }
  }
  check_factor(scale_);
}

std::vector<double> RuntimeProfile::effective_samples() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [this](double s) { return s * scale_; });
  return out;
}

RuntimeProfile scale_profile(const RuntimeProfile& profile, double factor) {
  check_factor(factor);
  return RuntimeProfile(profile.module_name(), profile.raw_samples(),
                        profile.scale() * factor);
}

ProfileStats profile_stats(const RuntimeProfile& profile, std::size_t bins) {
  const std::vector<double> xs = profile.effective_samples();
  ProfileStats st;
  const double n = static_cast<double>(xs.size());
  st.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - st.mean) * (x - st.mean);
  st.std = std::sqrt(ss / n);
  st.relative_std = st.std / st.mean;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  st.min = *lo;
  st.max = *hi;
  if (bins == 0) return st;
  st.histogram.assign(bins, 0);
  const double range = st.max - st.min;
  st.bin_width = range / static_cast<double>(bins);
  for (double x : xs) {
    std::size_t b = 0;
    if (range > 0.0) {
      b = static_cast<std::size_t>((x - st.min) / range * static_cast<double>(bins));
      b = std::min(b, bins - 1);
    }
    ++st.histogram[b];
  }
  return st;
}

RuntimeModel RuntimeModel::empirical(RuntimeProfile profile) {
  return RuntimeModel(Kind(std::move(profile)));
}

RuntimeModel RuntimeModel::constant(double seconds) {
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    throw DomainError("constant runtime must be positive");
  }
  return RuntimeModel(Kind(ConstantRuntime{seconds}));
}

RuntimeModel RuntimeModel::uniform(double lo, double hi) {
  if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi)) {
    throw DomainError("uniform runtime requires 0 < lo <= hi");
  }
  return RuntimeModel(Kind(UniformRuntime{lo, hi}));
}

double RuntimeModel::mean() const {
  if (const auto* p = std::get_if<RuntimeProfile>(&kind_)) {
    return profile_stats(*p, 0).mean;
  }
  if (const auto* c = std::get_if<ConstantRuntime>(&kind_)) return c->seconds;
  const auto& u = std::get<UniformRuntime>(kind_);
  return 0.5 * (u.lo + u.hi);
}

double RuntimeModel::max() const {
  if (const auto* p = std::get_if<RuntimeProfile>(&kind_)) {
    return profile_stats(*p, 0).max;
  }
  if (const auto* c = std::get_if<ConstantRuntime>(&kind_)) return c->seconds;
  return std::get<UniformRuntime>(kind_).hi;
}

RuntimeModel RuntimeModel::scaled(double factor) const {
  check_factor(factor);
  if (const auto* p = std::get_if<RuntimeProfile>(&kind_)) {
    return empirical(scale_profile(*p, factor));
  }
  if (const auto* c = std::get_if<ConstantRuntime>(&kind_)) {
    return constant(c->seconds * factor);
  }
  const auto& u = std::get<UniformRuntime>(kind_);
  return uniform(u.lo * factor, u.hi * factor);
}

std::string RuntimeModel::describe() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<RuntimeProfile>(&kind_)) {
    os << "empirical(" << p->size() << " samples, scale " << p->scale() << ")";
  } else if (const auto* c = std::get_if<ConstantRuntime>(&kind_)) {
    os << "constant(" << c->seconds << " s)";
  } else {
    const auto& u = std::get<UniformRuntime>(kind_);
    os << "uniform(" << u.lo << " s, " << u.hi << " s)";
  }
  return os.str();
}

double sample_runtime(const RuntimeModel& model, Rng& rng) {
  const auto& kind = model.kind();
  if (const auto* p = std::get_if<RuntimeProfile>(&kind)) {
    std::uniform_int_distribution<std::size_t> pick(0, p->size() - 1);
    return p->effective(pick(rng));
  }
  if (const auto* c = std::get_if<ConstantRuntime>(&kind)) return c->seconds;
  const auto& u = std::get<UniformRuntime>(kind);
  if (u.lo == u.hi) return u.lo;
  std::uniform_real_distribution<double> draw(u.lo, u.hi);
  return draw(rng);
}

void ProfileSet::set(const std::string& module, RuntimeModel model) {
  models_.insert_or_assign(module, std::move(model));
}

bool ProfileSet::contains(const std::string& module) const {
  return models_.count(module) != 0;
}

const RuntimeModel& ProfileSet::at(const std::string& module) const {
  auto it = models_.find(module);
  if (it == models_.end()) {
    throw ConfigError("no runtime profile for module '" + module + "'");
  }
  return it->second;
}

const RuntimeModel* ProfileSet::find(const std::string& module) const {
  auto it = models_.find(module);
  return it == models_.end() ? nullptr : &it->second;
}

void ProfileSet::scale(const std::string& module, double factor) {
  auto it = models_.find(module);
  if (it == models_.end()) {
    throw ConfigError("cannot scale '" + module + "': no runtime profile");
  }
  it->second = it->second.scaled(factor);
}

}  // namespace streambench
