#!/usr/bin/env python3
# Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates core/data/gazetteer.csv from the geonamescache package.

The representative point of each country is its capital (or, failing that,
its most populous city with population >= 500).
"""
import csv
import sys

import geonamescache

CONTINENTS = {
    "AF": "Africa",
    "AS": "Asia",
    "EU": "Europe",
    "NA": "North America",
    "OC": "Oceania",
    "SA": "South America",
}


def main(out_path):
    gc = geonamescache.GeonamesCache(min_city_population=500)
    cities = gc.get_cities().values()
    by_country = {}
    for c in cities:
        by_country.setdefault(c["countrycode"], []).append(c)
    rows = []
    for iso, country in gc.get_countries().items():
        continent = CONTINENTS.get(country["continentcode"])
        if continent is None:
            continue
        candidates = by_country.get(iso, [])
        if not candidates:
            continue
        capital = [c for c in candidates if c["name"] == country["capital"]]
        pick = max(capital or candidates, key=lambda c: c["population"])
        rows.append((country["name"].strip(), continent,
                     round(pick["latitude"], 4), round(pick["longitude"], 4)))
    rows.sort()
    with open(out_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["country", "continent", "latitude", "longitude"])
        w.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "core/data/gazetteer.csv")
