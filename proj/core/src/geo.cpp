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

#include "agl/geo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "agl/error.hpp"
#include "agl/io.hpp"

namespace agl::geo {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool IsStrippable(unsigned char c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'': case '`': case '(': case ')': case '[':
    case ']': case '{': case '}': case '*': case '_':
      return true;
    default:
      return false;
  }
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double ParseCoordinate(const std::string& field, std::size_t row) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::kParse, "gazetteer row " + std::to_string(row) +
                                       ": invalid coordinate '" + field + "'");
  }
  return v;
}

}  // namespace

GeoPoint::GeoPoint(double latitude_deg, double longitude_deg)
    : latitude_deg_(latitude_deg), longitude_deg_(longitude_deg) {
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) {
    throw Error(ErrorCode::kCoordinateRange,
                "latitude " + io::FormatShortest(latitude_deg) +
                    " outside [-90, 90]");
  }
  if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0)) {
    throw Error(ErrorCode::kCoordinateRange,
                "longitude " + io::FormatShortest(longitude_deg) +
                    " outside [-180, 180]");
  }
}

GeoPoint ValidateCoords(double longitude_deg, double latitude_deg) {
  return GeoPoint(latitude_deg, longitude_deg);
}

double HaversineKm(const GeoPoint& a, const GeoPoint& b) {
  // |difference| and the commutative product keep the result exactly
  // symmetric in (a, b).
  const double dphi =
      std::fabs(a.latitude_deg() - b.latitude_deg()) * kDegToRad;
  const double dlambda =
      std::fabs(a.longitude_deg() - b.longitude_deg()) * kDegToRad;
  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  const double h = s_phi * s_phi + std::cos(a.latitude_deg() * kDegToRad) *
                                       std::cos(b.latitude_deg() * kDegToRad) *
                                       s_lambda * s_lambda;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double Geoscore(double distance_km) {
  if (!(distance_km >= 0.0)) {
    throw Error(ErrorCode::kDomain, "distance must be non-negative");
  }
  return kGeoscoreMax * std::exp(-distance_km / kGeoscoreScaleKm);
}

std::optional<std::size_t> ContinentIndex(std::string_view continent) {
  for (std::size_t i = 0; i < kContinents.size(); ++i) {
    if (kContinents[i] == continent) return i;
  }
  return std::nullopt;
}

std::optional<PlaceLevel> ParsePlaceLevel(std::string_view text) {
  const std::string key = FoldKey(text);
  if (key == "city") return PlaceLevel::kCity;
  if (key == "country") return PlaceLevel::kCountry;
  if (key == "continent") return PlaceLevel::kContinent;
  return std::nullopt;
}

std::string FoldKey(std::string_view raw) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && IsStrippable(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && IsStrippable(static_cast<unsigned char>(raw[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  bool pending_space = false;
  for (std::size_t i = begin; i < end; ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c == ' ' || c == '\t') {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                           : static_cast<char>(c));
  }
  return out;
}

void AliasTable::Add(PlaceLevel level, std::string_view alias,
                     std::string_view canonical) {
  const std::string canon = Trim(canonical);
  entries_[{level, FoldKey(alias)}] = canon;
  entries_.try_emplace({level, FoldKey(canon)}, canon);
}

void AliasTable::AddName(PlaceLevel level, std::string_view canonical) {
  const std::string canon = Trim(canonical);
  entries_.try_emplace({level, FoldKey(canon)}, canon);
}

AliasTable AliasTable::Parse(std::string_view csv_text) {
  const auto rows = io::ParseCsv(csv_text);
  if (rows.empty() || rows[0].size() != 3 || FoldKey(rows[0][0]) != "level" ||
      FoldKey(rows[0][1]) != "alias" || FoldKey(rows[0][2]) != "canonical") {
    throw Error(ErrorCode::kParse,
                "alias table must start with header level,alias,canonical");
  }
  AliasTable table;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 3) {
      throw Error(ErrorCode::kParse,
                  "alias row " + std::to_string(i + 1) + " must have 3 fields");
    }
    const auto level = ParsePlaceLevel(row[0]);
    if (!level) {
      throw Error(ErrorCode::kParse, "alias row " + std::to_string(i + 1) +
                                         ": unknown level '" + row[0] + "'");
    }
    table.Add(*level, row[1], row[2]);
  }
  for (const auto& [key, canonical] : table.entries_) {
    auto self = table.entries_.find({std::get<0>(key), FoldKey(canonical)});
    if (self == table.entries_.end() || self->second != canonical) {
      throw Error(ErrorCode::kParse, "alias table maps '" + canonical +
                                         "' onward to another name");
    }
  }
  return table;
}

AliasTable AliasTable::Load(const std::filesystem::path& path) {
  return Parse(io::ReadFile(path));
}

std::optional<std::string> AliasTable::Find(PlaceLevel level,
                                            std::string_view raw) const {
  auto it = entries_.find({level, FoldKey(raw)});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

CanonicalMatch Canonicalize(PlaceLevel level, std::string_view raw,
                            const AliasTable& table) {
  if (auto hit = table.Find(level, raw)) return {std::move(*hit), true};
  return {std::string(raw), false};
}

Gazetteer Gazetteer::Parse(std::string_view csv_text) {
  const auto rows = io::ParseCsv(csv_text);
  if (rows.empty() || rows[0].size() < 2 || FoldKey(rows[0][0]) != "country" ||
      FoldKey(rows[0][1]) != "continent") {
    throw Error(ErrorCode::kParse,
                "gazetteer must start with header country,continent");
  }
  const bool has_points = rows[0].size() >= 4 &&
                          FoldKey(rows[0][2]) == "latitude" &&
                          FoldKey(rows[0][3]) == "longitude";
  Gazetteer g;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != rows[0].size()) {
      throw Error(ErrorCode::kParse, "gazetteer row " + std::to_string(i + 1) +
                                         " has the wrong number of fields");
    }
    GazetteerEntry e;
    e.country = Trim(row[0]);
    e.continent = Trim(row[1]);
    if (!ContinentIndex(e.continent)) {
      throw Error(ErrorCode::kOntology, "gazetteer row " + std::to_string(i + 1) +
                                            ": '" + e.continent +
                                            "' is not one of the six continents");
    }
    if (has_points && !row[2].empty() && !row[3].empty()) {
      e.point = GeoPoint(ParseCoordinate(row[2], i + 1),
                         ParseCoordinate(row[3], i + 1));
    }
    if (!g.by_country_.emplace(e.country, g.entries_.size()).second) {
      throw Error(ErrorCode::kDuplicate,
                  "gazetteer lists '" + e.country + "' more than once");
    }
    g.entries_.push_back(std::move(e));
  }
  return g;
}

Gazetteer Gazetteer::Load(const std::filesystem::path& path) {
  return Parse(io::ReadFile(path));
}

const std::string& Gazetteer::ContinentOf(std::string_view country) const {
  auto it = by_country_.find(country);
  if (it == by_country_.end()) {
    throw Error(ErrorCode::kUnknownCountry,
                "country '" + std::string(country) + "' is not in the gazetteer");
  }
  return entries_[it->second].continent;
}

bool Gazetteer::Contains(std::string_view country) const {
  return by_country_.find(country) != by_country_.end();
}

const GazetteerEntry& Gazetteer::Nearest(const GeoPoint& p) const {
  const GazetteerEntry* best = nullptr;
  double best_d = 0.0;
  for (const auto& e : entries_) {
    if (!e.point) continue;
    const double d = HaversineKm(p, *e.point);
    if (best == nullptr || d < best_d ||
        (d == best_d && e.country < best->country)) {
      best = &e;
      best_d = d;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kNotFound, "gazetteer has no representative points");
  }
  return *best;
}

void Gazetteer::AddCanonicalNamesTo(AliasTable& table) const {
  for (const auto& e : entries_) table.AddName(PlaceLevel::kCountry, e.country);
  for (auto c : kContinents) table.AddName(PlaceLevel::kContinent, c);
}

std::string CountryToContinent(std::string_view country, const Gazetteer& g) {
  return g.ContinentOf(country);
}

}  // namespace agl::geo
