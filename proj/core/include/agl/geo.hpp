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

// Great-circle distance, the distance-decay score, and place-name
// normalization against a country/continent gazetteer.

#ifndef AGL_GEO_HPP_
#define AGL_GEO_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace agl::geo {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kGeoscoreMax = 5000.0;
inline constexpr double kGeoscoreScaleKm = 1492.7;

class GeoPoint {
 public:
  // Throws Error(kCoordinateRange) unless latitude is in [-90, 90] and
  // longitude in [-180, 180].
  GeoPoint(double latitude_deg, double longitude_deg);

  double latitude_deg() const { return latitude_deg_; }
  double longitude_deg() const { return longitude_deg_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double latitude_deg_;
  double longitude_deg_;
};

// Note the argument order: longitude first, as in model outputs.
GeoPoint ValidateCoords(double longitude_deg, double latitude_deg);

double HaversineKm(const GeoPoint& a, const GeoPoint& b);

// 5000 * exp(-distance / 1492.7). Throws Error(kDomain) for a negative or
// NaN distance.
double Geoscore(double distance_km);

inline constexpr std::array<std::string_view, 6> kContinents = {
    "Africa", "Asia", "Europe", "North America", "Oceania", "South America"};

// Index into kContinents, or nullopt.
std::optional<std::size_t> ContinentIndex(std::string_view continent);

enum class PlaceLevel { kCity, kCountry, kContinent };
std::optional<PlaceLevel> ParsePlaceLevel(std::string_view text);

// Trims whitespace, strips surrounding punctuation and quotes, and lowercases
// ASCII letters. Non-ASCII bytes pass through unchanged.
std::string FoldKey(std::string_view raw);

struct CanonicalMatch {
  std::string text;
  bool matched = false;
};

// (level, folded alias) -> canonical name. Canonical names of every entry map
// to themselves, which makes canonicalization idempotent.
class AliasTable {
 public:
  void Add(PlaceLevel level, std::string_view alias, std::string_view canonical);
  // Self-maps `canonical` unless its key is already taken.
  void AddName(PlaceLevel level, std::string_view canonical);

  // CSV with header `level,alias,canonical`. Throws Error(kParse) on a bad
  // header, row width, level name, or an alias chain (a canonical name that
  // is itself aliased to something else).
  static AliasTable Load(const std::filesystem::path& path);
  static AliasTable Parse(std::string_view csv_text);

  std::optional<std::string> Find(PlaceLevel level, std::string_view raw) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::tuple<PlaceLevel, std::string>, std::string> entries_;
};

// Unmatched input is returned unchanged with matched = false.
CanonicalMatch Canonicalize(PlaceLevel level, std::string_view raw,
                            const AliasTable& table);

struct GazetteerEntry {
  std::string country;
  std::string continent;
  std::optional<GeoPoint> point;
};

// CSV with a header whose first two columns are `country,continent`;
// optional `latitude,longitude` columns give a representative point.
class Gazetteer {
 public:
  static Gazetteer Load(const std::filesystem::path& path);
  static Gazetteer Parse(std::string_view csv_text);

  // Throws Error(kUnknownCountry).
  const std::string& ContinentOf(std::string_view country) const;
  bool Contains(std::string_view country) const;

  const std::vector<GazetteerEntry>& entries() const { return entries_; }

  // Entry whose representative point is nearest to `p`; ties go to the
  // lexicographically smaller country. Throws Error(kNotFound) if no entry
  // has a point.
  const GazetteerEntry& Nearest(const GeoPoint& p) const;

  // Registers every country and continent name as a self-alias.
  void AddCanonicalNamesTo(AliasTable& table) const;

 private:
  std::vector<GazetteerEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> by_country_;
};

// Canonical country name -> continent, for the shipped gazetteer semantics.
std::string CountryToContinent(std::string_view country, const Gazetteer& g);

}  // namespace agl::geo

#endif  // AGL_GEO_HPP_
