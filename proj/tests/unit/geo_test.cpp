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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "agl/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace agl::geo {
namespace {

using agl::testing::LawOfCosinesKm;
using agl::testing::RelClose;

GeoPoint RandomPoint(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return GeoPoint(std::asin(u(rng)) * 180.0 / std::numbers::pi, 180.0 * u(rng));
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIo;
}

TEST(HaversineTest, IdentityIsZero) {
  const GeoPoint p(52.52, 13.405);
  EXPECT_EQ(HaversineKm(p, p), 0.0);
}

TEST(HaversineTest, AntipodalIsHalfCircumference) {
  const double d = HaversineKm(GeoPoint(0, 0), GeoPoint(0, 180));
  EXPECT_TRUE(RelClose(d, std::numbers::pi * 6371.0, 1e-6)) << d;
}

TEST(HaversineTest, BerlinLondonMatchesLawOfCosines) {
  const GeoPoint berlin(52.52, 13.405);
  const GeoPoint london(51.5074, -0.1278);
  const double d = HaversineKm(berlin, london);
  const long double oracle = LawOfCosinesKm(52.52, 13.405, 51.5074, -0.1278);
  EXPECT_TRUE(RelClose(d, oracle, 1e-6)) << d << " vs " << static_cast<double>(oracle);
  EXPECT_GT(d, 900.0);
  EXPECT_LT(d, 1000.0);
}

TEST(HaversineTest, SymmetricRangeAndTriangle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto a = RandomPoint(rng);
    const auto b = RandomPoint(rng);
    const auto c = RandomPoint(rng);
    const double ab = HaversineKm(a, b);
    EXPECT_EQ(ab, HaversineKm(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::numbers::pi * kEarthRadiusKm);
    EXPECT_LE(HaversineKm(a, c), ab + HaversineKm(b, c) + 1e-9);
  }
}

TEST(GeoscoreTest, KnownValues) {
  EXPECT_EQ(Geoscore(0.0), 5000.0);
  EXPECT_TRUE(RelClose(Geoscore(1492.7), 5000.0 / std::numbers::e, 1e-6));
  EXPECT_TRUE(RelClose(Geoscore(10000.0), agl::testing::GeoscoreLd(10000.0L), 1e-12));
}

TEST(GeoscoreTest, StrictlyDecreasingAndBounded) {
  double prev = Geoscore(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double s = Geoscore(i * 20.0);
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0.0);
    prev = s;
  }
}

TEST(GeoscoreTest, NegativeDistanceIsDomainError) {
  EXPECT_EQ(CodeOf([] { Geoscore(-1.0); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([] { Geoscore(std::nan("")); }), ErrorCode::kDomain);
}

TEST(ValidateCoordsTest, Ranges) {
  const auto p = ValidateCoords(13.405, 52.52);
  EXPECT_EQ(p.latitude_deg(), 52.52);
  EXPECT_EQ(p.longitude_deg(), 13.405);
  EXPECT_EQ(CodeOf([] { ValidateCoords(200, 0); }), ErrorCode::kCoordinateRange);
  EXPECT_EQ(CodeOf([] { ValidateCoords(0, -91); }), ErrorCode::kCoordinateRange);
  EXPECT_NO_THROW(ValidateCoords(-180, 90));
}

TEST(FoldKeyTest, TrimsCaseAndPunctuation) {
  EXPECT_EQ(FoldKey("  \"U.S.A.\" "), "u.s.a");
  EXPECT_EQ(FoldKey("New   York\tCity!"), "new york city");
  EXPECT_EQ(FoldKey("Zürich"), "z\xC3\xBCrich");
  EXPECT_EQ(FoldKey("..."), "");
}

TEST(CanonicalizeTest, PaperAliasesAndPassthrough) {
  const auto& t = agl::testing::ShippedTables();
  auto usa = Canonicalize(PlaceLevel::kCountry, "USA", t.aliases);
  EXPECT_EQ(usa.text, "United States");
  EXPECT_TRUE(usa.matched);
  auto oceania = Canonicalize(PlaceLevel::kContinent, "Australia", t.aliases);
  EXPECT_EQ(oceania.text, "Oceania");
  EXPECT_TRUE(oceania.matched);
  auto atlantis = Canonicalize(PlaceLevel::kCountry, " Atlantis ", t.aliases);
  EXPECT_EQ(atlantis.text, " Atlantis ");
  EXPECT_FALSE(atlantis.matched);
}

TEST(CanonicalizeTest, Idempotent) {
  const auto& t = agl::testing::ShippedTables();
  for (const auto& e : t.gazetteer.entries()) {
    for (const auto& raw : {e.country, FoldKey(e.country), "  " + e.country + "."}) {
      const auto once = Canonicalize(PlaceLevel::kCountry, raw, t.aliases);
      const auto twice = Canonicalize(PlaceLevel::kCountry, once.text, t.aliases);
      EXPECT_EQ(once.text, twice.text);
      EXPECT_EQ(once.text, e.country);
    }
  }
  for (const char* raw : {"usa", "U.K.", "Holland", "america", "Republic of Korea"}) {
    const auto once = Canonicalize(PlaceLevel::kCountry, raw, t.aliases);
    EXPECT_TRUE(once.matched) << raw;
    EXPECT_EQ(Canonicalize(PlaceLevel::kCountry, once.text, t.aliases).text, once.text);
  }
}

TEST(AliasTableTest, RejectsChainsAndBadHeaders) {
  EXPECT_EQ(CodeOf([] { AliasTable::Parse("a,b,c\n"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { AliasTable::Parse("level,alias,canonical\nplanet,x,y\n"); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] {
              AliasTable::Parse("level,alias,canonical\ncountry,A,B\ncountry,B,C\n");
            }),
            ErrorCode::kParse);
  const auto t = AliasTable::Parse("level,alias,canonical\ncity,NYC,New York City\n");
  EXPECT_EQ(*t.Find(PlaceLevel::kCity, "nyc"), "New York City");
  EXPECT_FALSE(t.Find(PlaceLevel::kCountry, "nyc"));
}

TEST(GazetteerTest, CountryToContinent) {
  const auto& g = agl::testing::ShippedTables().gazetteer;
  EXPECT_EQ(CountryToContinent("Morocco", g), "Africa");
  EXPECT_EQ(CountryToContinent("Sweden", g), "Europe");
  EXPECT_EQ(CodeOf([&] { CountryToContinent("Narnia", g); }), ErrorCode::kUnknownCountry);
}

TEST(GazetteerTest, EveryCountryHasOneOfSixContinents) {
  const auto& g = agl::testing::ShippedTables().gazetteer;
  EXPECT_GT(g.entries().size(), 190u);
  for (const auto& e : g.entries()) {
    EXPECT_TRUE(ContinentIndex(e.continent).has_value()) << e.country;
    EXPECT_TRUE(e.point.has_value()) << e.country;
  }
}

TEST(GazetteerTest, ParseErrors) {
  EXPECT_EQ(CodeOf([] { Gazetteer::Parse("country,continent\nX,Antarctica\n"); }),
            ErrorCode::kOntology);
  EXPECT_EQ(CodeOf([] { Gazetteer::Parse("country,continent\nX,Asia\nX,Asia\n"); }),
            ErrorCode::kDuplicate);
  EXPECT_EQ(CodeOf([] { Gazetteer::Parse("name,continent\n"); }), ErrorCode::kParse);
  const auto g = Gazetteer::Parse("country,continent\nX,Asia\n");
  EXPECT_EQ(CodeOf([&] { g.Nearest(GeoPoint(0, 0)); }), ErrorCode::kNotFound);
}

TEST(GazetteerTest, NearestByBruteForce) {
  const auto& g = agl::testing::ShippedTables().gazetteer;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto p = RandomPoint(rng);
    const auto& best = g.Nearest(p);
    for (const auto& e : g.entries()) {
      EXPECT_LE(HaversineKm(p, *best.point), HaversineKm(p, *e.point));
    }
  }
}

}  // namespace
}  // namespace agl::geo
