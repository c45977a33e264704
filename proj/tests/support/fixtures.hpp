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

// Synthetic inputs shared by the unit and acceptance tests.

#ifndef AGL_TESTS_FIXTURES_HPP_
#define AGL_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "agl/audio.hpp"
#include "agl/eval.hpp"
#include "agl/geo.hpp"
#include "agl/localizability.hpp"
#include "agl/tags.hpp"

namespace agl::testing {

inline constexpr std::uint32_t kRate = 16000;
inline constexpr std::size_t kClipSamples = 16000;

// Removed with its contents on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void WriteText(const std::filesystem::path& path, const std::string& text);
std::string ReadText(const std::filesystem::path& path);

// ---- audio ----
audio::AudioClip DigitalSilence();
audio::AudioClip WhiteNoise(std::uint64_t seed = 7, double amplitude = 0.3);
audio::AudioClip Chirp(double amplitude = 0.5, std::size_t samples = kClipSamples);
audio::AudioClip QuietChirp();     // fails only the RMS floor
audio::AudioClip ClippedSquare();  // sign(chirp); fails only clipping
audio::AudioClip ConstantTone();   // period 16 samples; fails only ACI

struct FilterFixture {
  std::string name;
  audio::AudioClip clip;
  std::string fails;  // "rms", "spectral_flatness", "clipping_ratio", "acoustic_complexity" or ""
};
std::vector<FilterFixture> FilterFixtureSet();

// ---- shipped reference tables ----
std::filesystem::path DataDir();
struct PlaceTables {
  geo::Gazetteer gazetteer;
  geo::AliasTable aliases;
};
const PlaceTables& ShippedTables();

// ---- localizability: 12 samples, categories Speech / Church bell / Wind ----
struct LocRow {
  std::string id;
  double error_km;
  double t_speech, t_bell, t_wind;
  double y_speech, y_bell, y_wind;
};
const std::vector<LocRow>& LocalizabilityRows();
std::vector<tags::CategoryFractions> LocFractions();
std::vector<loc::JudgeScores> LocJudges();  // two judges averaging to y
std::map<std::string, double> LocErrors();

// ---- evaluation: 20 samples with scripted predictions ----
struct EvalFixture {
  std::string manifest_jsonl;
  std::string predictions_jsonl;
  std::vector<eval::SampleRecord> samples;
  std::vector<eval::PredictionEntry> predictions;
};
EvalFixture TwentySampleFixture();

// Point km kilometres due north of p.
geo::GeoPoint NorthOf(const geo::GeoPoint& p, double km);

std::string AnswerJson(const std::string& city, const std::string& country,
                       const std::string& continent, double lat, double lon);

}  // namespace agl::testing

#endif  // AGL_TESTS_FIXTURES_HPP_
