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

// Recording-quality screen: RMS energy, spectral flatness, clipping ratio and
// acoustic complexity, each compared against a threshold.

#ifndef AGL_FILTERS_HPP_
#define AGL_FILTERS_HPP_

#include <cstddef>
#include <filesystem>
#include <string>

#include "agl/audio.hpp"

namespace agl::filters {

// A sample counts as clipped when |x| >= 1 - kClipEpsilon.
inline constexpr double kClipEpsilon = 1e-3;

struct FilterThresholds {
  double rms_min = 0.005;
  double sf_max = 0.5;
  double cr_max = 0.02;
  double aci_min = 0.05;

  // Throws Error(kConfig) when a field is outside its admissible range.
  void Validate() const;
};

// Reads {"rms_min":..., "sf_max":..., "cr_max":..., "aci_min":...}. Missing
// keys keep their defaults; unknown keys are rejected.
FilterThresholds LoadThresholds(const std::filesystem::path& path);
FilterThresholds ParseThresholds(const std::string& json_text);

struct FilterPasses {
  bool rms = false;
  bool spectral_flatness = false;
  bool clipping_ratio = false;
  bool acoustic_complexity = false;
  bool overall = false;
};

struct FilterReport {
  double rms = 0.0;
  double spectral_flatness = 0.0;
  double clipping_ratio = 0.0;
  double acoustic_complexity = 0.0;
  FilterPasses passed;
};

// sqrt(mean(x^2)). Throws Error(kEmptyInput) on an empty clip.
double RmsEnergy(const audio::AudioClip& clip);

// A bin whose power is at most this fraction of its frame's total power is
// treated as zero. Round-off of a double-precision transform lies many
// orders of magnitude below it.
inline constexpr double kZeroBinRelative = 1e-28;

// Per-frame geometric mean / arithmetic mean over bins, averaged over frames.
// Frames containing a zero bin (see kZeroBinRelative, which includes
// all-zero frames) score 0.
// Throws Error(kTooShort) when the spectrogram has no frames.
double SpectralFlatness(const audio::PowerSpectrogram& spec);

// Fraction of samples at digital full scale (see kClipEpsilon).
// Throws Error(kEmptyInput) on an empty clip.
double ClippingRatio(const audio::AudioClip& clip);

// Sum over bands of sum_t |E[f,t+1] - E[f,t]| / sum_t E[f,t]. Bands with zero
// total energy contribute 0. Throws Error(kTooShort) for fewer than 2 frames.
double AcousticComplexity(const audio::PowerSpectrogram& spec);

// Computes all four statistics and the pass flags.
FilterReport ApplyFilters(const audio::AudioClip& clip,
                          const FilterThresholds& thresholds,
                          std::size_t window_size = audio::kDefaultWindowSize,
                          std::size_t hop_size = audio::kDefaultHopSize);

FilterPasses Evaluate(const FilterReport& stats,
                      const FilterThresholds& thresholds);

// One JSON object (no trailing newline) with the report fields and `file`.
std::string ReportToJson(const std::string& file, const FilterReport& report);

}  // namespace agl::filters

#endif  // AGL_FILTERS_HPP_
