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

// Scoring of model predictions against ground truth: distance, Geoscore,
// hierarchical accuracy, thresholded accuracy, reject rate, speech split,
// percentiles, continent confusion, and a random-point baseline.

#ifndef AGL_EVAL_HPP_
#define AGL_EVAL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agl/geo.hpp"

namespace agl::eval {

inline constexpr double kRejectDistanceKm = 10000.0;
inline constexpr std::array<double, 3> kDefaultTauKm = {1.0, 10.0, 500.0};
inline constexpr std::array<double, 3> kPercentiles = {25.0, 50.0, 75.0};

struct CanonicalPlace {
  std::optional<std::string> city;
  std::string country;
  std::string continent;
};

struct SampleRecord {
  std::string sample_id;
  geo::GeoPoint truth;
  CanonicalPlace place;
  bool has_speech = false;
  std::string audio_path;
  double duration_s = 0.0;
};

// Manifest JSONL, one object per line with sample_id, latitude, longitude,
// city, country, continent, has_speech, audio_path, duration_s. Place names
// are canonicalized; the continent must match the gazetteer's continent for
// the country. Throws Error(kParse), Error(kDuplicate), Error(kOntology) or
// Error(kUnknownCountry).
std::vector<SampleRecord> ParseManifest(std::string_view jsonl,
                                        const geo::Gazetteer& gazetteer,
                                        const geo::AliasTable& aliases);
std::vector<SampleRecord> LoadManifest(const std::filesystem::path& path,
                                       const geo::Gazetteer& gazetteer,
                                       const geo::AliasTable& aliases);

enum class RejectCause { kRefusal, kMalformed, kOutOfRange };
std::string_view RejectCauseName(RejectCause cause);

struct Answer {
  CanonicalPlace place;
  geo::GeoPoint point;
  std::string reason;
};

struct Reject {
  RejectCause cause = RejectCause::kRefusal;
  std::string detail;
};

using Prediction = std::variant<Answer, Reject>;

// First balanced {...} in `raw`, skipping braces inside string literals.
std::optional<std::string_view> ExtractJsonObject(std::string_view raw);

// Total: every failure maps to a Reject. Objects that do not parse as strict
// JSON get one lenient pass (typographic quotes, missing or trailing commas).
// When the continent field is not one of the six names, the continent of the
// canonical country is used if `gazetteer` knows it.
Prediction ParsePrediction(std::string_view raw, const geo::AliasTable& aliases,
                           const geo::Gazetteer* gazetteer = nullptr);

struct EvalRecord {
  std::string sample_id;
  double distance_km = kRejectDistanceKm;
  bool continent_match = false;
  bool country_match = false;
  bool city_match = false;
  bool rejected = true;
  bool has_speech = false;
  std::string truth_continent;
  std::optional<std::string> predicted_continent;  // absent for rejects
};

EvalRecord EvaluateSample(const SampleRecord& sample, const Prediction& pred);

struct PredictionEntry {
  std::string sample_id;
  std::string raw_text;
};

std::vector<PredictionEntry> ParsePredictions(std::string_view jsonl);
std::vector<PredictionEntry> LoadPredictions(const std::filesystem::path& path);
std::string PredictionToJson(const PredictionEntry& p);

struct MetricsSummary {
  std::size_t n_samples = 0;
  double geoscore_mean = 0.0;
  double mean_distance_km = 0.0;
  double continent_acc = 0.0;
  double country_acc = 0.0;
  double city_acc = 0.0;
  double reject_rate = 0.0;
  std::map<double, double> acc_under;  // tau_km -> fraction with d < tau
  std::optional<double> speech_distance_km;     // absent with no speech samples
  std::optional<double> nonspeech_distance_km;  // absent with no other samples
  std::map<double, double> percentiles;         // q -> km
};

// Throws Error(kEmptyDataset) for no records and Error(kValidation) for a
// non-positive or non-finite tau.
MetricsSummary Summarize(std::span<const EvalRecord> records,
                         std::span<const double> tau_km);

// Linear interpolation between closest ranks (numpy's default). `values`
// need not be sorted. Throws Error(kEmptyDataset).
double Percentile(std::span<const double> values, double q);

struct EvalResult {
  std::vector<EvalRecord> records;  // sorted by sample_id
  MetricsSummary summary;
  std::vector<std::string> warnings;
};

// Missing predictions count as refusals (with a warning); predictions for
// unknown samples are ignored (with a warning). Throws Error(kEmptyDataset)
// and Error(kDuplicate).
EvalResult EvaluateDataset(std::span<const SampleRecord> samples,
                           std::span<const PredictionEntry> predictions,
                           const geo::AliasTable& aliases,
                           const geo::Gazetteer* gazetteer,
                           std::span<const double> tau_km);

// Rows are truth continents in kContinents order. Columns are the six
// continents, then rejects, then answers naming no known continent.
struct ConfusionMatrix {
  static constexpr std::size_t kRejectColumn = 6;
  static constexpr std::size_t kUnrecognizedColumn = 7;
  static constexpr std::size_t kColumns = 8;
  using Row = std::array<double, kColumns>;

  std::array<std::size_t, 6> counts{};
  std::array<std::optional<Row>, 6> rows;  // absent for empty truth rows
};

// Throws Error(kOntology) when a truth continent is not one of the six.
ConfusionMatrix BuildConfusion(std::span<const EvalRecord> records);

// Uniform points on the sphere, labelled with the nearest gazetteer point's
// country and continent, written as model-style JSON answers. Each sample's
// draw depends only on the seed and its id.
std::vector<PredictionEntry> RandomBaseline(std::span<const SampleRecord> samples,
                                            std::uint64_t seed,
                                            const geo::Gazetteer& gazetteer);

// Unit-interval draw for (seed, sample_id), exposed for sampler tests.
double BaselineUniform(std::uint64_t seed, std::string_view sample_id,
                       std::size_t index);

// "csv" or "markdown"; anything else throws Error(kFormat).
std::string EmitReport(const MetricsSummary& summary, std::string_view format,
                       std::string_view model = "model");
std::string EmitConfusion(const ConfusionMatrix& m, std::string_view format);
std::string EmitPercentiles(const MetricsSummary& summary,
                            std::string_view format,
                            std::string_view model = "model");

// Column heads of the main report, in order, including the leading Model.
std::vector<std::string> ReportHeader(const MetricsSummary& summary);

std::string SummaryToJson(const MetricsSummary& summary);
MetricsSummary ParseSummaryJson(std::string_view json_text);
std::string RecordToJson(const EvalRecord& r);

}  // namespace agl::eval

#endif  // AGL_EVAL_HPP_
