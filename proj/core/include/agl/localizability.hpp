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

// Audio localizability: per-category attribution of judged reasoning
// contributions and the resulting per-recording score
//
//   l_k = sum_{i in P} a_i t_{k,i} - sum_{i in N} abar_i t_{k,i}
//
// where t_{k,i} is the fraction of recording k during which category i is
// present, a_i is the through-origin slope of judged contribution against
// t_{k,i} over low-error recordings (e_k < gamma) and abar_i the same slope
// over high-error recordings (e_k >= gamma). A category is Positive when
// a_i > alpha, and Negative when abar_i > alpha and it is not Positive.

#ifndef AGL_LOCALIZABILITY_HPP_
#define AGL_LOCALIZABILITY_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agl/tags.hpp"

namespace agl::loc {

struct JudgeScores {
  std::string sample_id;
  std::string judge_id;
  std::map<std::string, double> scores;  // each in [0, 1]
};

using ContributionMap = std::map<std::string, double>;

struct ContributionRecord {
  std::string sample_id;
  ContributionMap mean_contribution;
  double distance_error_km = 0.0;
  tags::CategoryFractions fractions;
};

enum class Membership { kPositive, kNegative, kNeither };
std::string_view MembershipName(Membership m);
std::optional<Membership> ParseMembership(std::string_view text);

struct CategoryAttribution {
  std::string category;
  std::optional<double> slope_pos;  // absent when the low-error fit is degenerate
  std::optional<double> slope_neg;  // absent when the high-error fit is degenerate
  Membership membership = Membership::kNeither;
  std::size_t support_pos = 0;  // low-error points with t > 0
  std::size_t support_neg = 0;  // high-error points with t > 0
};

struct AttributionConfig {
  double alpha = 1.0 / 3.0;
  double gamma_km = 1000.0;
  double theta = 1.0;

  // Throws Error(kConfig) unless alpha > 0 and gamma_km > 0.
  void Validate() const;
};

// Reads {"alpha":..., "gamma_km":..., "theta":...}; missing keys keep their
// defaults.
AttributionConfig LoadAttributionConfig(const std::filesystem::path& path);
AttributionConfig ParseAttributionConfig(std::string_view json_text);

// Per-category mean over judges; a category a judge omits counts as 0.
// Throws Error(kMissingJudges) for an empty set, Error(kValidation) if the
// entries refer to different samples, Error(kDuplicate) if a judge appears
// twice.
ContributionMap AggregateJudges(std::span<const JudgeScores> scores);

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
};

// Least-squares slope of y = a x: sum(xy) / sum(x^2). Throws
// Error(kDegenerateFit) when sum(x^2) == 0.
double FitSlopeThroughOrigin(std::span<const FitPoint> points);

// One attribution per category seen in any record's fractions or
// contributions, sorted by category name.
std::vector<CategoryAttribution> ClassifyCategories(
    std::span<const ContributionRecord> records, const AttributionConfig& cfg);

// Neither-categories contribute nothing. Throws Error(kDuplicateAttribution)
// when a category appears twice in `attributions`.
double LocalizabilityScore(const tags::CategoryFractions& fractions,
                           std::span<const CategoryAttribution> attributions);

// Samples with score > theta (strict).
std::set<std::string> SelectLocalizable(
    const std::map<std::string, double>& scores, double theta);

// Mean score per group. Throws Error(kMissingGroup) when a scored sample has
// no group label.
std::map<std::string, double> GroupMeanLocalizability(
    const std::map<std::string, double>& scores,
    const std::map<std::string, std::string>& groups);

struct JudgePairConsistency {
  std::string judge_a;
  std::string judge_b;
  std::size_t shared_samples = 0;
  double mean_cosine = 0.0;
  double pearson = 0.0;
  double top_k_overlap = 0.0;
};

struct ConsistencyReport {
  std::size_t k = 0;
  std::vector<std::string> categories;
  std::vector<JudgePairConsistency> pairs;  // (a, b) with a < b
};

// Cosine similarity, 0 when either vector is all zeros.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Throws Error(kUndefinedCorrelation) when either vector is constant and
// Error(kValidation) on a length mismatch or fewer than 2 entries.
double PearsonCorrelation(std::span<const double> a, std::span<const double> b);

// Pairwise agreement between judges. The category axis is `categories` when
// given, otherwise every category any judge scored. For each pair only the
// samples both judges scored are compared. k is clamped to the number of
// categories; top-k ties break by category name.
//
// Throws Error(kValidation) with fewer than 2 judges, k == 0, or a pair with
// no shared samples; Error(kDuplicate) when a judge scores a sample twice;
// propagates Error(kUndefinedCorrelation).
ConsistencyReport JudgeConsistency(
    std::span<const JudgeScores> all_scores, std::size_t k,
    const std::optional<std::vector<std::string>>& categories = std::nullopt);

// JSONL formats. Error files carry {"sample_id", "distance_error_km"}; an
// evaluation record's "distance_km" is accepted in place of the latter.
std::vector<JudgeScores> ParseJudgeTraces(std::string_view jsonl);
std::vector<JudgeScores> LoadJudgeTraces(const std::filesystem::path& path);
std::map<std::string, double> ParseErrors(std::string_view jsonl);
std::map<std::string, double> LoadErrors(const std::filesystem::path& path);
std::string AttributionToJson(const CategoryAttribution& a);
std::vector<CategoryAttribution> ParseAttributions(std::string_view jsonl);
std::vector<CategoryAttribution> LoadAttributions(
    const std::filesystem::path& path);
std::string ConsistencyToJson(const ConsistencyReport& report);

// Joins fractions, judge traces and distance errors on sample_id. The record
// set is the samples present in `errors`; each must have fractions and at
// least one judge entry (Error(kNotFound) / Error(kMissingJudges) otherwise).
std::vector<ContributionRecord> BuildContributionRecords(
    std::span<const tags::CategoryFractions> fractions,
    std::span<const JudgeScores> judges,
    const std::map<std::string, double>& errors);

}  // namespace agl::loc

#endif  // AGL_LOCALIZABILITY_HPP_
