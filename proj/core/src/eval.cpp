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

#include "agl/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "agl/numeric.hpp"
#include "json_util.hpp"

namespace agl::eval {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kLeftQuote = "\xE2\x80\x9C";   // U+201C
constexpr std::string_view kRightQuote = "\xE2\x80\x9D";  // U+201D

std::optional<std::string> OptionalString(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  return std::nullopt;
}

std::optional<double> LooseNumber(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (it->is_number()) return it->get<double>();
  if (!it->is_string()) return std::nullopt;
  const auto s = it->get<std::string>();
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return std::nullopt;
  const auto last = s.find_last_not_of(" \t");
  const char* begin = s.data() + first;
  const char* end = s.data() + last + 1;
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

char LastSignificant(const std::string& s) {
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (!std::isspace(static_cast<unsigned char>(*it))) return *it;
  }
  return '\0';
}

char NextSignificant(std::string_view s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(s[i]))) return s[i];
  }
  return '\0';
}

// Typographic double quotes become ASCII ones where they sit next to JSON
// structure; elsewhere they are left alone as string content.
std::string StraightenStructuralQuotes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto rest = s.substr(i);
    const bool curly = rest.starts_with(kLeftQuote) || rest.starts_with(kRightQuote);
    if (!curly) {
      out.push_back(s[i++]);
      continue;
    }
    const char before = LastSignificant(out);
    const char after = NextSignificant(s, i + 3);
    const bool structural = before == '{' || before == ',' || before == ':' ||
                            before == '[' || after == ':' || after == ',' ||
                            after == '}' || after == ']';
    if (structural) {
      out.push_back('"');
    } else {
      out.append(rest.substr(0, 3));
    }
    i += 3;
  }
  return out;
}

bool EndsValue(char c) {
  return c == '"' || c == '}' || c == ']' || c == 'e' || c == 'l' ||
         (c >= '0' && c <= '9');
}

// Inserts commas missing between members and drops trailing commas.
std::string RepairCommas(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 8);
  bool in_string = false;
  bool escaped = false;
  for (const char c : s) {
    if (in_string) {
      out.push_back(c);
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      if (EndsValue(LastSignificant(out))) out.push_back(',');
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c == '}' || c == ']') {
      auto pos = out.find_last_not_of(" \t\r\n");
      if (pos != std::string::npos && out[pos] == ',') out.erase(pos, 1);
    }
    out.push_back(c);
  }
  return out;
}

std::optional<json> ParseObject(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

Reject MakeReject(RejectCause cause, std::string detail) {
  return Reject{cause, std::move(detail)};
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double ToUnit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

enum class Format { kCsv, kMarkdown };

Format ParseFormat(std::string_view format) {
  if (format == "csv") return Format::kCsv;
  if (format == "markdown" || format == "md") return Format::kMarkdown;
  throw Error(ErrorCode::kFormat, "unsupported report format '" + std::string(format) +
                                      "' (expected csv or markdown)");
}

std::string Cell(std::optional<double> v, Format f) {
  if (!v) return f == Format::kCsv ? "" : "-";
  return f == Format::kCsv ? io::FormatShortest(*v) : io::FormatFixed(*v, 2);
}

std::string Render(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows, Format f) {
  std::ostringstream out;
  if (f == Format::kCsv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << io::CsvEscape(cells[i]);
      }
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  } else {
    auto line = [&](const std::vector<std::string>& cells) {
      out << '|';
      for (const auto& c : cells) out << ' ' << c << " |";
      out << '\n';
    };
    line(header);
    out << "|---|";
    for (std::size_t i = 1; i < header.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& r : rows) line(r);
  }
  return out.str();
}

std::string TauLabel(double tau) { return "<" + io::FormatShortest(tau) + " acc."; }

json OptionalNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::map<double, double> NumberMap(const json& j, const char* what) {
  std::map<double, double> out;
  if (!j.is_object()) throw Error(ErrorCode::kParse, std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    double k = 0.0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), k);
    if (res.ec != std::errc() || res.ptr != key.data() + key.size() || !value.is_number()) {
      throw Error(ErrorCode::kParse, std::string(what) + ": bad entry '" + key + "'");
    }
    out[k] = value.get<double>();
  }
  return out;
}

}  // namespace

std::vector<SampleRecord> ParseManifest(std::string_view jsonl,
                                        const geo::Gazetteer& gazetteer,
                                        const geo::AliasTable& aliases) {
  std::vector<SampleRecord> out;
  std::set<std::string> seen;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    const auto where = json_util::Where(line);
    const auto id = json_util::RequireString(j, "sample_id", line);
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kDuplicate, where + "duplicate sample '" + id + "'");
    }
    const double lat = json_util::RequireNumber(j, "latitude", line);
    const double lon = json_util::RequireNumber(j, "longitude", line);
    std::optional<geo::GeoPoint> truth;
    try {
      truth.emplace(lat, lon);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }

    CanonicalPlace place;
    if (auto city = OptionalString(j, "city"); city && !geo::FoldKey(*city).empty()) {
      place.city = geo::Canonicalize(geo::PlaceLevel::kCity, *city, aliases).text;
    }
    place.country = geo::Canonicalize(geo::PlaceLevel::kCountry,
                                      json_util::RequireString(j, "country", line), aliases)
                        .text;
    place.continent = geo::Canonicalize(geo::PlaceLevel::kContinent,
                                        json_util::RequireString(j, "continent", line),
                                        aliases)
                          .text;
    if (!geo::ContinentIndex(place.continent)) {
      throw Error(ErrorCode::kOntology,
                  where + "'" + place.continent + "' is not one of the six continents");
    }
    std::string expected;
    try {
      expected = gazetteer.ContinentOf(place.country);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
    if (expected != place.continent) {
      throw Error(ErrorCode::kValidation, where + "continent '" + place.continent +
                                              "' disagrees with gazetteer '" + expected +
                                              "' for " + place.country);
    }
    const double duration = json_util::RequireNumber(j, "duration_s", line);
    if (!(duration >= 0.0)) {
      throw Error(ErrorCode::kValidation, where + "duration_s must be >= 0");
    }
    out.push_back(SampleRecord{id, *truth, std::move(place),
                               json_util::RequireBool(j, "has_speech", line),
                               json_util::RequireString(j, "audio_path", line), duration});
  }
  return out;
}

std::vector<SampleRecord> LoadManifest(const std::filesystem::path& path,
                                       const geo::Gazetteer& gazetteer,
                                       const geo::AliasTable& aliases) {
  try {
    return ParseManifest(io::ReadFile(path), gazetteer, aliases);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string_view RejectCauseName(RejectCause cause) {
  switch (cause) {
    case RejectCause::kRefusal: return "refusal";
    case RejectCause::kMalformed: return "malformed";
    case RejectCause::kOutOfRange: return "out-of-range";
  }
  return "refusal";
}

std::optional<std::string_view> ExtractJsonObject(std::string_view raw) {
  for (std::size_t start = raw.find('{'); start != std::string_view::npos;
       start = raw.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
      const char c = raw[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        return raw.substr(start, i - start + 1);
      }
    }
  }
  return std::nullopt;
}

Prediction ParsePrediction(std::string_view raw, const geo::AliasTable& aliases,
                           const geo::Gazetteer* gazetteer) {
  std::optional<json> obj;
  bool found = false;
  if (auto text = ExtractJsonObject(raw)) {
    found = true;
    obj = ParseObject(*text);
  }
  if (!obj) {
    const std::string straight = StraightenStructuralQuotes(raw);
    if (auto text = ExtractJsonObject(straight)) {
      found = true;
      obj = ParseObject(RepairCommas(*text));
    }
  }
  if (!found) return MakeReject(RejectCause::kRefusal, "no JSON object in response");
  if (!obj) return MakeReject(RejectCause::kMalformed, "JSON object does not parse");

  const auto lon = LooseNumber(*obj, "longitude");
  const auto lat = LooseNumber(*obj, "latitude");
  if (!lon || !lat) {
    return MakeReject(RejectCause::kMalformed, "missing or non-numeric coordinates");
  }
  std::optional<geo::GeoPoint> point;
  try {
    point = geo::ValidateCoords(*lon, *lat);
  } catch (const Error& e) {
    return MakeReject(RejectCause::kOutOfRange, e.what());
  }

  CanonicalPlace place;
  if (auto city = OptionalString(*obj, "city"); city && !geo::FoldKey(*city).empty()) {
    place.city = geo::Canonicalize(geo::PlaceLevel::kCity, *city, aliases).text;
  }
  place.country =
      geo::Canonicalize(geo::PlaceLevel::kCountry,
                        OptionalString(*obj, "country").value_or(""), aliases)
          .text;
  place.continent =
      geo::Canonicalize(geo::PlaceLevel::kContinent,
                        OptionalString(*obj, "continent").value_or(""), aliases)
          .text;
  if (!geo::ContinentIndex(place.continent) && gazetteer != nullptr &&
      gazetteer->Contains(place.country)) {
    place.continent = gazetteer->ContinentOf(place.country);
  }
  return Answer{std::move(place), *point, OptionalString(*obj, "reason").value_or("")};
}

EvalRecord EvaluateSample(const SampleRecord& sample, const Prediction& pred) {
  EvalRecord r;
  r.sample_id = sample.sample_id;
  r.has_speech = sample.has_speech;
  r.truth_continent = sample.place.continent;
  const auto* answer = std::get_if<Answer>(&pred);
  if (answer == nullptr) return r;  // defaults encode a reject
  r.rejected = false;
  r.distance_km = geo::HaversineKm(sample.truth, answer->point);
  r.predicted_continent = answer->place.continent;
  auto same = [](std::string_view a, std::string_view b) {
    const auto fa = geo::FoldKey(a);
    return !fa.empty() && fa == geo::FoldKey(b);
  };
  r.continent_match = same(answer->place.continent, sample.place.continent);
  r.country_match = same(answer->place.country, sample.place.country);
  r.city_match = sample.place.city && answer->place.city &&
                 same(*answer->place.city, *sample.place.city);
  return r;
}

std::vector<PredictionEntry> ParsePredictions(std::string_view jsonl) {
  std::vector<PredictionEntry> out;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    out.push_back({json_util::RequireString(j, "sample_id", line),
                   json_util::RequireString(j, "raw_text", line)});
  }
  return out;
}

std::vector<PredictionEntry> LoadPredictions(const std::filesystem::path& path) {
  return ParsePredictions(io::ReadFile(path));
}

std::string PredictionToJson(const PredictionEntry& p) {
  ordered_json j;
  j["sample_id"] = p.sample_id;
  j["raw_text"] = p.raw_text;
  return j.dump();
}

double Percentile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyDataset, "percentile of no values");
  if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorCode::kDomain, "percentile outside [0,100]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

MetricsSummary Summarize(std::span<const EvalRecord> records,
                         std::span<const double> tau_km) {
  if (records.empty()) throw Error(ErrorCode::kEmptyDataset, "no samples to evaluate");
  for (const double t : tau_km) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::kValidation, "distance thresholds must be positive");
    }
  }
  // Fixed summation order makes every field independent of input order.
  std::vector<const EvalRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->sample_id < b->sample_id;
  });

  CompensatedSum distance;
  CompensatedSum score;
  CompensatedSum speech;
  CompensatedSum nonspeech;
  std::size_t n_speech = 0;
  std::size_t cont = 0, country = 0, city = 0, rejects = 0;
  std::map<double, std::size_t> under;
  for (const double t : tau_km) under[t] = 0;
  std::vector<double> distances;
  distances.reserve(sorted.size());
  for (const auto* r : sorted) {
    distance.Add(r->distance_km);
    score.Add(geo::Geoscore(r->distance_km));
    (r->has_speech ? speech : nonspeech).Add(r->distance_km);
    n_speech += r->has_speech ? 1 : 0;
    cont += r->continent_match ? 1 : 0;
    country += r->country_match ? 1 : 0;
    city += r->city_match ? 1 : 0;
    rejects += r->rejected ? 1 : 0;
    for (auto& [t, count] : under) count += r->distance_km < t ? 1 : 0;
    distances.push_back(r->distance_km);
  }

  MetricsSummary s;
  s.n_samples = sorted.size();
  const auto n = static_cast<double>(s.n_samples);
  s.geoscore_mean = score.Value() / n;
  s.mean_distance_km = distance.Value() / n;
  s.continent_acc = static_cast<double>(cont) / n;
  s.country_acc = static_cast<double>(country) / n;
  s.city_acc = static_cast<double>(city) / n;
  s.reject_rate = static_cast<double>(rejects) / n;
  for (const auto& [t, count] : under) s.acc_under[t] = static_cast<double>(count) / n;
  const std::size_t n_other = s.n_samples - n_speech;
  if (n_speech > 0) s.speech_distance_km = speech.Value() / static_cast<double>(n_speech);
  if (n_other > 0) s.nonspeech_distance_km = nonspeech.Value() / static_cast<double>(n_other);
  for (const double q : kPercentiles) s.percentiles[q] = Percentile(distances, q);
  return s;
}

EvalResult EvaluateDataset(std::span<const SampleRecord> samples,
                           std::span<const PredictionEntry> predictions,
                           const geo::AliasTable& aliases,
                           const geo::Gazetteer* gazetteer,
                           std::span<const double> tau_km) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyDataset, "manifest has no samples");
  std::map<std::string_view, const PredictionEntry*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.sample_id, &p).second) {
      throw Error(ErrorCode::kDuplicate,
                  "more than one prediction for sample '" + p.sample_id + "'");
    }
  }
  std::vector<const SampleRecord*> sorted;
  sorted.reserve(samples.size());
  for (const auto& s : samples) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->sample_id < b->sample_id;
  });

  EvalResult result;
  std::set<std::string_view> known;
  for (const auto* s : sorted) {
    known.insert(s->sample_id);
    auto it = by_id.find(s->sample_id);
    if (it == by_id.end()) {
      result.warnings.push_back("no prediction for sample '" + s->sample_id +
                                "'; counted as a refusal");
      result.records.push_back(EvaluateSample(*s, Reject{RejectCause::kRefusal, "missing"}));
      continue;
    }
    result.records.push_back(
        EvaluateSample(*s, ParsePrediction(it->second->raw_text, aliases, gazetteer)));
  }
  for (const auto& [id, p] : by_id) {
    if (!known.count(id)) {
      result.warnings.push_back("prediction for unknown sample '" + std::string(id) +
                                "' ignored");
    }
  }
  result.summary = Summarize(result.records, tau_km);
  return result;
}

ConfusionMatrix BuildConfusion(std::span<const EvalRecord> records) {
  ConfusionMatrix m;
  std::array<std::array<std::size_t, ConfusionMatrix::kColumns>, 6> counts{};
  for (const auto& r : records) {
    const auto row = geo::ContinentIndex(r.truth_continent);
    if (!row) {
      throw Error(ErrorCode::kOntology, "sample '" + r.sample_id + "' has truth continent '" +
                                            r.truth_continent + "'");
    }
    std::size_t col = ConfusionMatrix::kRejectColumn;
    if (!r.rejected) {
      const auto pred = r.predicted_continent ? geo::ContinentIndex(*r.predicted_continent)
                                              : std::nullopt;
      col = pred ? *pred : ConfusionMatrix::kUnrecognizedColumn;
    }
    ++counts[*row][col];
    ++m.counts[*row];
  }
  for (std::size_t i = 0; i < 6; ++i) {
    if (m.counts[i] == 0) continue;
    ConfusionMatrix::Row row{};
    const auto n = static_cast<double>(m.counts[i]);
    for (std::size_t j = 0; j < ConfusionMatrix::kColumns; ++j) {
      row[j] = static_cast<double>(counts[i][j]) / n;
    }
    m.rows[i] = row;
  }
  return m;
}

double BaselineUniform(std::uint64_t seed, std::string_view sample_id, std::size_t index) {
  std::mt19937_64 rng(SplitMix64(seed ^ Fnv1a(sample_id)));
  rng.discard(index);
  return ToUnit(rng());
}

std::vector<PredictionEntry> RandomBaseline(std::span<const SampleRecord> samples,
                                            std::uint64_t seed,
                                            const geo::Gazetteer& gazetteer) {
  constexpr double kRadToDeg = 180.0 / std::numbers::pi;
  std::vector<const SampleRecord*> sorted;
  for (const auto& s : samples) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->sample_id < b->sample_id;
  });
  std::vector<PredictionEntry> out;
  out.reserve(sorted.size());
  for (const auto* s : sorted) {
    std::mt19937_64 rng(SplitMix64(seed ^ Fnv1a(s->sample_id)));
    const double u = ToUnit(rng());
    const double v = ToUnit(rng());
    const double lat = std::asin(2.0 * u - 1.0) * kRadToDeg;
    const double lon = 360.0 * v - 180.0;
    const auto& nearest = gazetteer.Nearest(geo::GeoPoint(lat, lon));
    ordered_json j;
    j["reason"] = "uniform random point on the sphere";
    j["city"] = "";
    j["country"] = nearest.country;
    j["continent"] = nearest.continent;
    j["longitude"] = lon;
    j["latitude"] = lat;
    out.push_back({s->sample_id, j.dump()});
  }
  return out;
}

std::vector<std::string> ReportHeader(const MetricsSummary& summary) {
  std::vector<std::string> h = {"Model",       "Geo-score",    "Distance",
                                "Cont. acc.",  "Country acc.", "City acc.",
                                "Reject rate"};
  for (const auto& [t, v] : summary.acc_under) h.push_back(TauLabel(t));
  h.push_back("Speech dis.");
  h.push_back("Non-speech dis.");
  return h;
}

std::string EmitReport(const MetricsSummary& s, std::string_view format,
                       std::string_view model) {
  const Format f = ParseFormat(format);
  std::vector<std::string> row = {std::string(model),      Cell(s.geoscore_mean, f),
                                  Cell(s.mean_distance_km, f), Cell(s.continent_acc, f),
                                  Cell(s.country_acc, f),  Cell(s.city_acc, f),
                                  Cell(s.reject_rate, f)};
  for (const auto& [t, v] : s.acc_under) row.push_back(Cell(v, f));
  row.push_back(Cell(s.speech_distance_km, f));
  row.push_back(Cell(s.nonspeech_distance_km, f));
  return Render(ReportHeader(s), {row}, f);
}

std::string EmitPercentiles(const MetricsSummary& s, std::string_view format,
                            std::string_view model) {
  const Format f = ParseFormat(format);
  std::vector<std::string> header = {"Model"};
  std::vector<std::string> row = {std::string(model)};
  for (const auto& [q, v] : s.percentiles) {
    header.push_back("q" + io::FormatShortest(q));
    row.push_back(Cell(v, f));
  }
  return Render(header, {row}, f);
}

std::string EmitConfusion(const ConfusionMatrix& m, std::string_view format) {
  const Format f = ParseFormat(format);
  std::vector<std::string> header = {"truth"};
  for (auto c : geo::kContinents) header.emplace_back(c);
  header.emplace_back("Reject");
  header.emplace_back("Unrecognized");
  header.emplace_back("n");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < 6; ++i) {
    std::vector<std::string> row = {std::string(geo::kContinents[i])};
    for (std::size_t j = 0; j < ConfusionMatrix::kColumns; ++j) {
      row.push_back(Cell(m.rows[i] ? std::optional<double>((*m.rows[i])[j]) : std::nullopt, f));
    }
    row.push_back(std::to_string(m.counts[i]));
    rows.push_back(std::move(row));
  }
  return Render(header, rows, f);
}

std::string SummaryToJson(const MetricsSummary& s) {
  ordered_json j;
  j["n_samples"] = s.n_samples;
  j["geoscore_mean"] = s.geoscore_mean;
  j["mean_distance_km"] = s.mean_distance_km;
  j["continent_acc"] = s.continent_acc;
  j["country_acc"] = s.country_acc;
  j["city_acc"] = s.city_acc;
  j["reject_rate"] = s.reject_rate;
  ordered_json under = ordered_json::object();
  for (const auto& [t, v] : s.acc_under) under[io::FormatShortest(t)] = v;
  j["acc_under"] = std::move(under);
  j["speech_distance_km"] = OptionalNumber(s.speech_distance_km);
  j["nonspeech_distance_km"] = OptionalNumber(s.nonspeech_distance_km);
  ordered_json pct = ordered_json::object();
  for (const auto& [q, v] : s.percentiles) pct[io::FormatShortest(q)] = v;
  j["percentiles"] = std::move(pct);
  return j.dump(2) + "\n";
}

MetricsSummary ParseSummaryJson(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("summary: ") + e.what());
  }
  const io::Line line{1, {}};
  MetricsSummary s;
  try {
    s.n_samples = static_cast<std::size_t>(json_util::RequireNumber(j, "n_samples", line));
    s.geoscore_mean = json_util::RequireNumber(j, "geoscore_mean", line);
    s.mean_distance_km = json_util::RequireNumber(j, "mean_distance_km", line);
    s.continent_acc = json_util::RequireNumber(j, "continent_acc", line);
    s.country_acc = json_util::RequireNumber(j, "country_acc", line);
    s.city_acc = json_util::RequireNumber(j, "city_acc", line);
    s.reject_rate = json_util::RequireNumber(j, "reject_rate", line);
    s.acc_under = NumberMap(json_util::Require(j, "acc_under", line), "acc_under");
    s.percentiles = NumberMap(json_util::Require(j, "percentiles", line), "percentiles");
    for (auto [key, field] : {std::pair{"speech_distance_km", &s.speech_distance_km},
                              std::pair{"nonspeech_distance_km", &s.nonspeech_distance_km}}) {
      const auto& v = json_util::Require(j, key, line);
      if (v.is_number()) {
        *field = v.get<double>();
      } else if (!v.is_null()) {
        throw Error(ErrorCode::kParse, std::string(key) + " must be a number or null");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("summary: ") + e.what());
  }
  return s;
}

std::string RecordToJson(const EvalRecord& r) {
  ordered_json j;
  j["sample_id"] = r.sample_id;
  j["distance_km"] = r.distance_km;
  j["geoscore"] = geo::Geoscore(r.distance_km);
  j["continent_match"] = r.continent_match;
  j["country_match"] = r.country_match;
  j["city_match"] = r.city_match;
  j["rejected"] = r.rejected;
  j["has_speech"] = r.has_speech;
  j["truth_continent"] = r.truth_continent;
  j["predicted_continent"] =
      r.predicted_continent ? ordered_json(*r.predicted_continent) : ordered_json(nullptr);
  return j.dump();
}

}  // namespace agl::eval
