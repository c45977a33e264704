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

#include "agl/tags.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "json_util.hpp"

namespace agl::tags {

Ontology Ontology::Parse(std::string_view text) {
  std::set<std::string> labels;
  for (const auto& line : io::SplitLines(text)) {
    std::string label = line.text;
    const auto first = label.find_first_not_of(" \t");
    const auto last = label.find_last_not_of(" \t");
    label = label.substr(first, last - first + 1);
    if (label.starts_with('#')) continue;
    labels.insert(std::move(label));
  }
  return Ontology(std::move(labels));
}

Ontology Ontology::Load(const std::filesystem::path& path) {
  return Parse(io::ReadFile(path));
}

std::vector<TagSegment> ParseTagTrack(std::string_view jsonl,
                                      const Ontology& ontology) {
  std::vector<TagSegment> segments;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    TagSegment seg;
    seg.category = json_util::RequireString(j, "category", line);
    seg.start_s = json_util::RequireNumber(j, "start_s", line);
    seg.end_s = json_util::RequireNumber(j, "end_s", line);
    if (!ontology.Contains(seg.category)) {
      throw Error(ErrorCode::kOntology,
                  "line " + std::to_string(line.number) +
                      ": category '" + seg.category + "' is not in the ontology");
    }
    if (!(seg.start_s >= 0.0) || !(seg.end_s > seg.start_s)) {
      throw Error(ErrorCode::kMalformedSegment,
                  "line " + std::to_string(line.number) +
                      ": segment must satisfy 0 <= start_s < end_s");
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::vector<TagSegment> LoadTagTrack(const std::filesystem::path& path,
                                     const Ontology& ontology) {
  try {
    return ParseTagTrack(io::ReadFile(path), ontology);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

CategoryFractions TimeFractions(std::span<const TagSegment> segments,
                                double duration_s, std::string sample_id) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::kValidation, "duration must be positive");
  }
  std::map<std::string, std::vector<std::pair<double, double>>> by_category;
  for (const auto& seg : segments) {
    if (seg.start_s < 0.0 || seg.end_s > duration_s) {
      throw Error(ErrorCode::kOutOfRange,
                  "segment [" + io::FormatShortest(seg.start_s) + ", " +
                      io::FormatShortest(seg.end_s) + "] of '" + seg.category +
                      "' exceeds the duration " + io::FormatShortest(duration_s));
    }
    by_category[seg.category].emplace_back(seg.start_s, seg.end_s);
  }

  CategoryFractions out;
  out.sample_id = std::move(sample_id);
  for (auto& [category, intervals] : by_category) {
    std::sort(intervals.begin(), intervals.end());
    double covered = 0.0;
    double run_start = intervals.front().first;
    double run_end = intervals.front().second;
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].first <= run_end) {
        run_end = std::max(run_end, intervals[i].second);
      } else {
        covered += run_end - run_start;
        run_start = intervals[i].first;
        run_end = intervals[i].second;
      }
    }
    covered += run_end - run_start;
    out.fractions[category] = std::clamp(covered / duration_s, 0.0, 1.0);
  }
  return out;
}

bool HasSpeech(const CategoryFractions& fractions) {
  return fractions.at(std::string(kSpeechCategory)) > 0.0;
}

std::string FractionsToJson(const CategoryFractions& fractions) {
  nlohmann::ordered_json j;
  j["sample_id"] = fractions.sample_id;
  j["has_speech"] = HasSpeech(fractions);
  nlohmann::ordered_json map = nlohmann::ordered_json::object();
  for (const auto& [category, value] : fractions.fractions) map[category] = value;
  j["fractions"] = std::move(map);
  return j.dump();
}

std::vector<CategoryFractions> ParseFractionsJsonl(std::string_view jsonl) {
  std::vector<CategoryFractions> out;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    CategoryFractions cf;
    cf.sample_id = json_util::RequireString(j, "sample_id", line);
    const auto& map = json_util::RequireObject(j, "fractions", line);
    for (const auto& [category, value] : map.items()) {
      if (!value.is_number()) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line.number) +
                                           ": fraction for '" + category +
                                           "' is not a number");
      }
      const double v = value.get<double>();
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kOutOfRange, "line " + std::to_string(line.number) +
                                                ": fraction for '" + category +
                                                "' outside [0,1]");
      }
      cf.fractions[category] = v;
    }
    out.push_back(std::move(cf));
  }
  return out;
}

std::vector<CategoryFractions> LoadFractions(const std::filesystem::path& path) {
  return ParseFractionsJsonl(io::ReadFile(path));
}

}  // namespace agl::tags
