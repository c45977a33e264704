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

// Sound-event tag tracks and their reduction to per-category time fractions.

#ifndef AGL_TAGS_HPP_
#define AGL_TAGS_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agl::tags {

inline constexpr std::string_view kSpeechCategory = "Speech";

// Newline-delimited list of category display names.
class Ontology {
 public:
  Ontology() = default;
  explicit Ontology(std::set<std::string> labels) : labels_(std::move(labels)) {}

  static Ontology Load(const std::filesystem::path& path);
  static Ontology Parse(std::string_view text);

  bool Contains(std::string_view label) const {
    return labels_.find(std::string(label)) != labels_.end();
  }
  const std::set<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

 private:
  std::set<std::string> labels_;
};

struct TagSegment {
  std::string category;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct CategoryFractions {
  std::string sample_id;
  std::map<std::string, double> fractions;

  double at(const std::string& category) const {
    auto it = fractions.find(category);
    return it == fractions.end() ? 0.0 : it->second;
  }
};

// One JSON object per line: {"category":..., "start_s":..., "end_s":...}.
// Throws Error(kOntology) on a label missing from `ontology`,
// Error(kMalformedSegment) when end_s <= start_s or start_s < 0, and
// Error(kParse) on invalid JSON.
std::vector<TagSegment> LoadTagTrack(const std::filesystem::path& path,
                                     const Ontology& ontology);
std::vector<TagSegment> ParseTagTrack(std::string_view jsonl,
                                      const Ontology& ontology);

// Union measure of each category's intervals divided by the duration.
// Throws Error(kValidation) for a non-positive duration and
// Error(kOutOfRange) when a segment extends past it.
CategoryFractions TimeFractions(std::span<const TagSegment> segments,
                                double duration_s, std::string sample_id = {});

bool HasSpeech(const CategoryFractions& fractions);

// Fractions file: one {"sample_id":..., "has_speech":..., "fractions":{...}}
// per line.
std::string FractionsToJson(const CategoryFractions& fractions);
std::vector<CategoryFractions> ParseFractionsJsonl(std::string_view jsonl);
std::vector<CategoryFractions> LoadFractions(const std::filesystem::path& path);

}  // namespace agl::tags

#endif  // AGL_TAGS_HPP_
