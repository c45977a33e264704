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

#include "fixtures.hpp"

#include <stdlib.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace agl::testing {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ChirpSample(std::size_t n, std::size_t total) {
  const double t = static_cast<double>(n) / kRate;
  const double duration = static_cast<double>(total) / kRate;
  const double f0 = 200.0;
  const double f1 = 4000.0;
  return std::sin(kTwoPi * (f0 * t + (f1 - f0) * t * t / (2.0 * duration)));
}

}  // namespace

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "agl-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

audio::AudioClip DigitalSilence() {
  return audio::AudioClip(std::vector<double>(kClipSamples, 0.0), kRate);
}

audio::AudioClip WhiteNoise(std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(kClipSamples);
  for (auto& v : x) {
    v = amplitude * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
  }
  return audio::AudioClip(std::move(x), kRate);
}

audio::AudioClip Chirp(double amplitude, std::size_t samples) {
  std::vector<double> x(samples);
  for (std::size_t n = 0; n < samples; ++n) x[n] = amplitude * ChirpSample(n, samples);
  return audio::AudioClip(std::move(x), kRate);
}

audio::AudioClip QuietChirp() { return Chirp(0.002); }

audio::AudioClip ClippedSquare() {
  std::vector<double> x(kClipSamples);
  for (std::size_t n = 0; n < kClipSamples; ++n) {
    x[n] = ChirpSample(n, kClipSamples) >= 0.0 ? 1.0 : -1.0;
  }
  return audio::AudioClip(std::move(x), kRate);
}

audio::AudioClip ConstantTone() {
  // Period 16 divides the 1024-sample hop, so every frame is identical.
  std::vector<double> x(kClipSamples);
  for (std::size_t n = 0; n < kClipSamples; ++n) {
    x[n] = 0.5 * std::sin(kTwoPi * static_cast<double>(n % 16) / 16.0);
  }
  return audio::AudioClip(std::move(x), kRate);
}

std::vector<FilterFixture> FilterFixtureSet() {
  return {
      {"silence", QuietChirp(), "rms"},
      {"white_noise", WhiteNoise(), "spectral_flatness"},
      {"clipped_square", ClippedSquare(), "clipping_ratio"},
      {"constant_tone", ConstantTone(), "acoustic_complexity"},
      {"chirp", Chirp(), ""},
  };
}

std::filesystem::path DataDir() { return AGL_DATA_DIR; }

const PlaceTables& ShippedTables() {
  static const PlaceTables tables = [] {
    PlaceTables t{geo::Gazetteer::Load(DataDir() / "gazetteer.csv"),
                  geo::AliasTable::Load(DataDir() / "aliases.csv")};
    t.gazetteer.AddCanonicalNamesTo(t.aliases);
    return t;
  }();
  return tables;
}

// Low-error rows lie on y = 2t (Speech), 0.25t (bell), 0.125t (wind);
// high-error rows on 0.25t, 0.5t, 0.25t. All values are dyadic, so every
// slope and score below is exact in binary floating point.
const std::vector<LocRow>& LocalizabilityRows() {
  static const std::vector<LocRow> rows = {
      {"s01", 10.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.0},
      {"s02", 50.0, 0.25, 0.5, 0.0, 0.5, 0.125, 0.0},
      {"s03", 200.0, 0.5, 0.0, 0.5, 1.0, 0.0, 0.0625},
      {"s04", 400.0, 0.0, 0.25, 0.0, 0.0, 0.0625, 0.0},
      {"s05", 800.0, 0.125, 0.0, 0.25, 0.25, 0.0, 0.03125},
      {"s06", 999.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {"s07", 1000.0, 0.0, 0.5, 0.5, 0.0, 0.25, 0.125},
      {"s08", 2500.0, 1.0, 1.0, 0.0, 0.25, 0.5, 0.0},
      {"s09", 5000.0, 0.0, 0.25, 0.25, 0.0, 0.125, 0.0625},
      {"s10", 8000.0, 0.25, 0.0, 1.0, 0.0625, 0.0, 0.25},
      {"s11", 10000.0, 0.0, 0.75, 0.0, 0.0, 0.375, 0.0},
      {"s12", 12000.0, 1.0, 0.5, 0.5, 0.25, 0.25, 0.125},
  };
  return rows;
}

std::vector<tags::CategoryFractions> LocFractions() {
  std::vector<tags::CategoryFractions> out;
  for (const auto& r : LocalizabilityRows()) {
    tags::CategoryFractions f;
    f.sample_id = r.id;
    if (r.t_speech > 0) f.fractions["Speech"] = r.t_speech;
    if (r.t_bell > 0) f.fractions["Church bell"] = r.t_bell;
    if (r.t_wind > 0) f.fractions["Wind"] = r.t_wind;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<loc::JudgeScores> LocJudges() {
  constexpr double kDelta = 0.03125;
  auto spread = [](double y, double sign) {
    return (y >= kDelta && y + kDelta <= 1.0) ? y + sign * kDelta : y;
  };
  std::vector<loc::JudgeScores> out;
  for (const auto& r : LocalizabilityRows()) {
    for (const double sign : {1.0, -1.0}) {
      loc::JudgeScores js;
      js.sample_id = r.id;
      js.judge_id = sign > 0 ? "judge-a" : "judge-b";
      js.scores["Speech"] = spread(r.y_speech, sign);
      js.scores["Church bell"] = spread(r.y_bell, sign);
      js.scores["Wind"] = spread(r.y_wind, sign);
      out.push_back(std::move(js));
    }
  }
  return out;
}

std::map<std::string, double> LocErrors() {
  std::map<std::string, double> out;
  for (const auto& r : LocalizabilityRows()) out[r.id] = r.error_km;
  return out;
}

geo::GeoPoint NorthOf(const geo::GeoPoint& p, double km) {
  const double dlat = km / geo::kEarthRadiusKm * 180.0 / std::numbers::pi;
  return geo::GeoPoint(p.latitude_deg() + dlat, p.longitude_deg());
}

std::string AnswerJson(const std::string& city, const std::string& country,
                       const std::string& continent, double lat, double lon) {
  nlohmann::ordered_json j;
  j["reason"] = "scripted";
  j["city"] = city;
  j["country"] = country;
  j["continent"] = continent;
  j["longitude"] = lon;
  j["latitude"] = lat;
  return j.dump();
}

EvalFixture TwentySampleFixture() {
  struct Truth {
    const char* city;
    const char* country;
    const char* continent;
    double lat, lon;
  };
  static const Truth kTruth[20] = {
      {"Berlin", "Germany", "Europe", 52.52, 13.405},
      {"Paris", "France", "Europe", 48.8566, 2.3522},
      {"Tokyo", "Japan", "Asia", 35.6762, 139.6503},
      {"Nairobi", "Kenya", "Africa", -1.2921, 36.8219},
      {"Lima", "Peru", "South America", -12.0464, -77.0428},
      {"Sydney", "Australia", "Oceania", -33.8688, 151.2093},
      {"Toronto", "Canada", "North America", 43.6532, -79.3832},
      {"Mumbai", "India", "Asia", 19.076, 72.8777},
      {"Cairo", "Egypt", "Africa", 30.0444, 31.2357},
      {"Madrid", "Spain", "Europe", 40.4168, -3.7038},
      {"Seoul", "South Korea", "Asia", 37.5665, 126.978},
      {"Mexico City", "Mexico", "North America", 19.4326, -99.1332},
      {"Buenos Aires", "Argentina", "South America", -34.6037, -58.3816},
      {"Auckland", "New Zealand", "Oceania", -36.8485, 174.7633},
      {"Stockholm", "Sweden", "Europe", 59.3293, 18.0686},
      {"Essaouira", "Morocco", "Africa", 31.5085, -9.7595},
      {"Istanbul", "Turkey", "Asia", 41.0082, 28.9784},
      {"Kobe", "Japan", "Asia", 34.6901, 135.1955},
      {"New York City", "United States", "North America", 40.7829, -73.9654},
      {"London", "United Kingdom", "Europe", 51.5074, -0.1278},
  };
  static const char* kWrongCountry[4][2] = {
      {"Uruguay", "South America"},
      {"Australia", "Oceania"},
      {"Norway", "Europe"},
      {"Algeria", "Africa"},
  };

  EvalFixture fx;
  for (int i = 0; i < 20; ++i) {
    const auto& t = kTruth[i];
    char id[8];
    std::snprintf(id, sizeof(id), "e%02d", i + 1);
    const bool speech = i % 2 == 0;
    nlohmann::ordered_json m;
    m["sample_id"] = id;
    m["latitude"] = t.lat;
    m["longitude"] = t.lon;
    m["city"] = t.city;
    m["country"] = t.country;
    m["continent"] = t.continent;
    m["has_speech"] = speech;
    m["audio_path"] = std::string(id) + ".wav";
    m["duration_s"] = 10.0;
    fx.manifest_jsonl += m.dump() + "\n";
    fx.samples.push_back(eval::SampleRecord{id, geo::GeoPoint(t.lat, t.lon),
                                            eval::CanonicalPlace{t.city, t.country, t.continent},
                                            speech, std::string(id) + ".wav", 10.0});

    const geo::GeoPoint truth(t.lat, t.lon);
    std::string raw;
    if (i < 4) {
      raw = AnswerJson(t.city, t.country, t.continent, t.lat, t.lon);
    } else if (i < 8) {
      const auto p = NorthOf(truth, 5.0);
      raw = "```json\n" + AnswerJson(t.city, t.country, t.continent, p.latitude_deg(),
                                     p.longitude_deg()) + "\n```";
    } else if (i < 12) {
      const auto p = NorthOf(truth, 50.0);
      raw = AnswerJson("Elsewhere", t.country, t.continent, p.latitude_deg(), p.longitude_deg());
    } else if (i < 16) {
      const auto p = NorthOf(truth, 600.0);
      raw = "My answer: " + AnswerJson("Elsewhere", kWrongCountry[i - 12][0],
                                       kWrongCountry[i - 12][1], p.latitude_deg(),
                                       p.longitude_deg());
    } else if (i == 16) {
      const auto p = NorthOf(truth, 3000.0);
      raw = AnswerJson("Oslo", "Norway", "Europe", p.latitude_deg(), p.longitude_deg());
    } else if (i == 17) {
      raw = "I cannot determine the location.";
    } else if (i == 18) {
      raw = "{\"city\": \"New York\", \"latitude\": }";
    } else {
      raw = AnswerJson(t.city, t.country, t.continent, t.lat, 200.0);
    }
    fx.predictions.push_back({id, raw});
    nlohmann::ordered_json p;
    p["sample_id"] = id;
    p["raw_text"] = raw;
    fx.predictions_jsonl += p.dump() + "\n";
  }
  return fx;
}

}  // namespace agl::testing
