/* Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "agl/filters.hpp"

#include <algorithm>
#include <cmath>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "agl/numeric.hpp"
#include "json.hpp"

namespace agl::filters {

using audio::AudioClip;
using audio::PowerSpectrogram;

void FilterThresholds::Validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(rms_min >= 0.0)) throw Error(ErrorCode::kConfig, "rms_min must be >= 0");
  if (!unit(sf_max)) throw Error(ErrorCode::kConfig, "sf_max must be in [0,1]");
  if (!unit(cr_max)) throw Error(ErrorCode::kConfig, "cr_max must be in [0,1]");
  if (!(aci_min >= 0.0)) throw Error(ErrorCode::kConfig, "aci_min must be >= 0");
}

FilterThresholds ParseThresholds(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("threshold config: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfig, "threshold config must be a JSON object");
  }
  FilterThresholds t;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) {
      throw Error(ErrorCode::kConfig, "threshold '" + key + "' must be a number");
    }
    const double v = value.get<double>();
    if (key == "rms_min") {
      t.rms_min = v;
    } else if (key == "sf_max") {
      t.sf_max = v;
    } else if (key == "cr_max") {
      t.cr_max = v;
    } else if (key == "aci_min") {
      t.aci_min = v;
    } else {
      throw Error(ErrorCode::kConfig, "unknown threshold key '" + key + "'");
    }
  }
  t.Validate();
  return t;
}

FilterThresholds LoadThresholds(const std::filesystem::path& path) {
  return ParseThresholds(io::ReadFile(path));
}

double RmsEnergy(const AudioClip& clip) {
  if (clip.empty()) throw Error(ErrorCode::kEmptyInput, "RMS of empty clip");
  CompensatedSum sum;
  for (double x : clip.samples()) sum.Add(x * x);
  return std::sqrt(sum.Value() / static_cast<double>(clip.size()));
}

double SpectralFlatness(const PowerSpectrogram& spec) {
  if (spec.num_frames() == 0 || spec.num_bands() == 0) {
    throw Error(ErrorCode::kTooShort, "spectral flatness needs >= 1 frame");
  }
  const auto bins = static_cast<double>(spec.num_bands());
  CompensatedSum total;
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    CompensatedSum lin_sum;
    for (std::size_t f = 0; f < spec.num_bands(); ++f) lin_sum.Add(spec.at(f, t));
    const double zero_level = kZeroBinRelative * lin_sum.Value();
    CompensatedSum log_sum;
    bool has_zero = false;
    for (std::size_t f = 0; f < spec.num_bands(); ++f) {
      const double p = spec.at(f, t);
      if (p <= zero_level) {
        has_zero = true;
        break;
      }
      log_sum.Add(std::log(p));
    }
    if (has_zero) continue;
    const double geometric = std::exp(log_sum.Value() / bins);
    const double arithmetic = lin_sum.Value() / bins;
    total.Add(std::min(1.0, geometric / arithmetic));
  }
  return std::clamp(total.Value() / static_cast<double>(spec.num_frames()), 0.0,
                    1.0);
}

double ClippingRatio(const AudioClip& clip) {
  if (clip.empty()) throw Error(ErrorCode::kEmptyInput, "clipping ratio of empty clip");
  const double level = 1.0 - kClipEpsilon;
  const auto samples = clip.samples();
  const auto clipped = std::count_if(samples.begin(), samples.end(),
                                     [level](double x) { return std::fabs(x) >= level; });
  return static_cast<double>(clipped) / static_cast<double>(samples.size());
}

double AcousticComplexity(const PowerSpectrogram& spec) {
  if (spec.num_frames() < 2) {
    throw Error(ErrorCode::kTooShort, "acoustic complexity needs >= 2 frames");
  }
  CompensatedSum aci;
  for (std::size_t f = 0; f < spec.num_bands(); ++f) {
    const auto band = spec.band(f);
    CompensatedSum change;
    CompensatedSum energy;
    energy.Add(band[0]);
    for (std::size_t t = 1; t < band.size(); ++t) {
      change.Add(std::fabs(band[t] - band[t - 1]));
      energy.Add(band[t]);
    }
    if (energy.Value() > 0.0) aci.Add(change.Value() / energy.Value());
  }
  return aci.Value();
}

FilterPasses Evaluate(const FilterReport& stats,
                      const FilterThresholds& thresholds) {
  FilterPasses p;
  p.rms = stats.rms >= thresholds.rms_min;
  p.spectral_flatness = stats.spectral_flatness <= thresholds.sf_max;
  p.clipping_ratio = stats.clipping_ratio <= thresholds.cr_max;
  p.acoustic_complexity = stats.acoustic_complexity >= thresholds.aci_min;
  p.overall = p.rms && p.spectral_flatness && p.clipping_ratio &&
              p.acoustic_complexity;
  return p;
}

FilterReport ApplyFilters(const AudioClip& clip,
                          const FilterThresholds& thresholds,
                          std::size_t window_size, std::size_t hop_size) {
  thresholds.Validate();
  const auto spec = audio::ComputePowerSpectrogram(clip, window_size, hop_size);
  FilterReport report;
  report.rms = RmsEnergy(clip);
  report.spectral_flatness = SpectralFlatness(spec);
  report.clipping_ratio = ClippingRatio(clip);
  report.acoustic_complexity = AcousticComplexity(spec);
  report.passed = Evaluate(report, thresholds);
  return report;
}

std::string ReportToJson(const std::string& file, const FilterReport& report) {
  nlohmann::ordered_json j;
  j["file"] = file;
  j["rms"] = report.rms;
  j["spectral_flatness"] = report.spectral_flatness;
  j["clipping_ratio"] = report.clipping_ratio;
  j["acoustic_complexity"] = report.acoustic_complexity;
  j["passed"] = {
      {"rms", report.passed.rms},
      {"spectral_flatness", report.passed.spectral_flatness},
      {"clipping_ratio", report.passed.clipping_ratio},
      {"acoustic_complexity", report.passed.acoustic_complexity},
      {"overall", report.passed.overall},
  };
  return j.dump();
}

}  // namespace agl::filters
