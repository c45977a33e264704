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

#include "agl/localizability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "agl/error.hpp"
#include "agl/io.hpp"
#include "agl/numeric.hpp"
#include "json_util.hpp"

namespace agl::loc {
namespace {

using SampleScores = std::map<std::string, std::map<std::string, double>>;

void CheckScore(double v, const std::string& category) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "judge score for '" + category +
                                            "' outside [0,1]");
  }
}

struct SlopeAccumulator {
  CompensatedSum xy;
  CompensatedSum xx;
  std::size_t support = 0;

  void Add(double x, double y) {
    xy.Add(x * y);
    xx.Add(x * x);
    if (x > 0.0) ++support;
  }

  std::optional<double> Slope() const {
    if (xx.Value() == 0.0) return std::nullopt;
    return xy.Value() / xx.Value();
  }
};

double Lookup(const std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

// Category totals over the given samples, in `axis` order.
std::vector<double> Totals(const std::map<std::string, std::map<std::string, double>>& by_sample,
                           const std::vector<std::string>& samples,
                           const std::vector<std::string>& axis) {
  std::vector<double> out(axis.size());
  for (std::size_t c = 0; c < axis.size(); ++c) {
    CompensatedSum s;
    for (const auto& sample : samples) s.Add(Lookup(by_sample.at(sample), axis[c]));
    out[c] = s.Value();
  }
  return out;
}

std::set<std::size_t> TopK(const std::vector<double>& totals, std::size_t k) {
  std::vector<std::size_t> order(totals.size());
  std::iota(order.begin(), order.end(), 0);
  // Axis is sorted by name, so index order is the name tie-break.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return totals[a] > totals[b];
  });
  return std::set<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
}

}  // namespace

std::string_view MembershipName(Membership m) {
  switch (m) {
    case Membership::kPositive: return "Positive";
    case Membership::kNegative: return "Negative";
    case Membership::kNeither: return "Neither";
  }
  return "Neither";
}

std::optional<Membership> ParseMembership(std::string_view text) {
  if (text == "Positive") return Membership::kPositive;
  if (text == "Negative") return Membership::kNegative;
  if (text == "Neither") return Membership::kNeither;
  return std::nullopt;
}

void AttributionConfig::Validate() const {
  if (!(alpha > 0.0)) throw Error(ErrorCode::kConfig, "alpha must be > 0");
  if (!(gamma_km > 0.0)) throw Error(ErrorCode::kConfig, "gamma_km must be > 0");
  if (!std::isfinite(theta)) throw Error(ErrorCode::kConfig, "theta must be finite");
}

AttributionConfig ParseAttributionConfig(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("attribution config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "attribution config must be an object");
  AttributionConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) {
      throw Error(ErrorCode::kConfig, "attribution key '" + key + "' must be a number");
    }
    if (key == "alpha") {
      cfg.alpha = value.get<double>();
    } else if (key == "gamma_km") {
      cfg.gamma_km = value.get<double>();
    } else if (key == "theta") {
      cfg.theta = value.get<double>();
    } else {
      throw Error(ErrorCode::kConfig, "unknown attribution key '" + key + "'");
    }
  }
  cfg.Validate();
  return cfg;
}

AttributionConfig LoadAttributionConfig(const std::filesystem::path& path) {
  return ParseAttributionConfig(io::ReadFile(path));
}

ContributionMap AggregateJudges(std::span<const JudgeScores> scores) {
  if (scores.empty()) throw Error(ErrorCode::kMissingJudges, "no judge scores");
  const std::string& sample = scores.front().sample_id;
  std::set<std::string> judges;
  std::map<std::string, CompensatedSum> sums;
  for (const auto& js : scores) {
    if (js.sample_id != sample) {
      throw Error(ErrorCode::kValidation,
                  "judge scores mix samples '" + sample + "' and '" + js.sample_id + "'");
    }
    if (!judges.insert(js.judge_id).second) {
      throw Error(ErrorCode::kDuplicate, "judge '" + js.judge_id +
                                             "' scored sample '" + sample + "' twice");
    }
    for (const auto& [category, v] : js.scores) {
      CheckScore(v, category);
      sums[category].Add(v);
    }
  }
  ContributionMap out;
  const auto n = static_cast<double>(scores.size());
  for (const auto& [category, sum] : sums) out[category] = sum.Value() / n;
  return out;
}

double FitSlopeThroughOrigin(std::span<const FitPoint> points) {
  SlopeAccumulator acc;
  for (const auto& p : points) acc.Add(p.x, p.y);
  const auto slope = acc.Slope();
  if (!slope) {
    throw Error(ErrorCode::kDegenerateFit, "sum of x^2 is zero; slope undefined");
  }
  return *slope;
}

std::vector<CategoryAttribution> ClassifyCategories(
    std::span<const ContributionRecord> records, const AttributionConfig& cfg) {
  cfg.Validate();
  std::vector<const ContributionRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->sample_id < b->sample_id;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->sample_id == sorted[i - 1]->sample_id) {
      throw Error(ErrorCode::kDuplicate,
                  "sample '" + sorted[i]->sample_id + "' appears twice");
    }
  }

  std::set<std::string> categories;
  for (const auto* r : sorted) {
    for (const auto& [c, v] : r->fractions.fractions) categories.insert(c);
    for (const auto& [c, v] : r->mean_contribution) categories.insert(c);
  }

  std::vector<CategoryAttribution> out;
  out.reserve(categories.size());
  for (const auto& category : categories) {
    SlopeAccumulator low;
    SlopeAccumulator high;
    for (const auto* r : sorted) {
      const double x = r->fractions.at(category);
      const double y = Lookup(r->mean_contribution, category);
      if (r->distance_error_km < cfg.gamma_km) {
        low.Add(x, y);
      } else {
        high.Add(x, y);
      }
    }
    CategoryAttribution a;
    a.category = category;
    a.slope_pos = low.Slope();
    a.slope_neg = high.Slope();
    a.support_pos = low.support;
    a.support_neg = high.support;
    if (a.slope_pos && *a.slope_pos > cfg.alpha) {
      a.membership = Membership::kPositive;
    } else if (a.slope_neg && *a.slope_neg > cfg.alpha) {
      a.membership = Membership::kNegative;
    }
    out.push_back(std::move(a));
  }
  return out;
}

double LocalizabilityScore(const tags::CategoryFractions& fractions,
                           std::span<const CategoryAttribution> attributions) {
  std::set<std::string_view> seen;
  CompensatedSum score;
  for (const auto& a : attributions) {
    if (!seen.insert(a.category).second) {
      throw Error(ErrorCode::kDuplicateAttribution,
                  "category '" + a.category + "' attributed twice");
    }
    const double t = fractions.at(a.category);
    if (t == 0.0) continue;
    if (a.membership == Membership::kPositive) {
      score.Add(*a.slope_pos * t);
    } else if (a.membership == Membership::kNegative) {
      score.Add(-*a.slope_neg * t);
    }
  }
  return score.Value();
}

std::set<std::string> SelectLocalizable(
    const std::map<std::string, double>& scores, double theta) {
  std::set<std::string> out;
  for (const auto& [sample, l] : scores) {
    if (l > theta) out.insert(sample);
  }
  return out;
}

std::map<std::string, double> GroupMeanLocalizability(
    const std::map<std::string, double>& scores,
    const std::map<std::string, std::string>& groups) {
  std::map<std::string, std::pair<CompensatedSum, std::size_t>> acc;
  for (const auto& [sample, l] : scores) {
    auto it = groups.find(sample);
    if (it == groups.end()) {
      throw Error(ErrorCode::kMissingGroup, "sample '" + sample + "' has no group");
    }
    auto& [sum, n] = acc[it->second];
    sum.Add(l);
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [group, sn] : acc) {
    out[group] = sn.first.Value() / static_cast<double>(sn.second);
  }
  return out;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kValidation, "cosine: length mismatch");
  CompensatedSum dot;
  CompensatedSum na;
  CompensatedSum nb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot.Add(a[i] * b[i]);
    na.Add(a[i] * a[i]);
    nb.Add(b[i] * b[i]);
  }
  if (na.Value() == 0.0 || nb.Value() == 0.0) return 0.0;
  // sqrt(x * x) == x exactly, so identical vectors give exactly 1.
  return std::clamp(dot.Value() / std::sqrt(na.Value() * nb.Value()), -1.0, 1.0);
}

double PearsonCorrelation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kValidation, "pearson: length mismatch");
  if (a.size() < 2) throw Error(ErrorCode::kValidation, "pearson needs >= 2 entries");
  CompensatedSum sa;
  CompensatedSum sb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa.Add(a[i]);
    sb.Add(b[i]);
  }
  const double ma = sa.Value() / static_cast<double>(a.size());
  const double mb = sb.Value() / static_cast<double>(b.size());
  CompensatedSum cov;
  CompensatedSum va;
  CompensatedSum vb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov.Add(da * db);
    va.Add(da * da);
    vb.Add(db * db);
  }
  if (va.Value() == 0.0 || vb.Value() == 0.0) {
    throw Error(ErrorCode::kUndefinedCorrelation,
                "Pearson correlation of a constant vector is undefined");
  }
  return std::clamp(cov.Value() / std::sqrt(va.Value() * vb.Value()), -1.0, 1.0);
}

ConsistencyReport JudgeConsistency(
    std::span<const JudgeScores> all_scores, std::size_t k,
    const std::optional<std::vector<std::string>>& categories) {
  if (k == 0) throw Error(ErrorCode::kValidation, "k must be positive");
  std::map<std::string, SampleScores> by_judge;
  std::set<std::string> seen_categories;
  for (const auto& js : all_scores) {
    auto& samples = by_judge[js.judge_id];
    if (!samples.emplace(js.sample_id, js.scores).second) {
      throw Error(ErrorCode::kDuplicate, "judge '" + js.judge_id +
                                             "' scored sample '" + js.sample_id + "' twice");
    }
    for (const auto& [c, v] : js.scores) {
      CheckScore(v, c);
      seen_categories.insert(c);
    }
  }
  if (by_judge.size() < 2) {
    throw Error(ErrorCode::kValidation, "judge consistency needs >= 2 judges");
  }

  ConsistencyReport report;
  if (categories) {
    std::set<std::string> axis(categories->begin(), categories->end());
    report.categories.assign(axis.begin(), axis.end());
  } else {
    report.categories.assign(seen_categories.begin(), seen_categories.end());
  }
  const auto& axis = report.categories;
  report.k = std::min(k, axis.size());

  for (auto a = by_judge.begin(); a != by_judge.end(); ++a) {
    for (auto b = std::next(a); b != by_judge.end(); ++b) {
      std::vector<std::string> shared;
      for (const auto& [sample, scores] : a->second) {
        if (b->second.count(sample)) shared.push_back(sample);
      }
      if (shared.empty()) {
        throw Error(ErrorCode::kValidation, "judges '" + a->first + "' and '" +
                                                b->first + "' share no samples");
      }
      JudgePairConsistency pc;
      pc.judge_a = a->first;
      pc.judge_b = b->first;
      pc.shared_samples = shared.size();

      CompensatedSum cos_sum;
      std::vector<double> va(axis.size());
      std::vector<double> vb(axis.size());
      for (const auto& sample : shared) {
        const auto& sa = a->second.at(sample);
        const auto& sb = b->second.at(sample);
        for (std::size_t c = 0; c < axis.size(); ++c) {
          va[c] = Lookup(sa, axis[c]);
          vb[c] = Lookup(sb, axis[c]);
        }
        cos_sum.Add(CosineSimilarity(va, vb));
      }
      pc.mean_cosine = cos_sum.Value() / static_cast<double>(shared.size());

      const auto ta = Totals(a->second, shared, axis);
      const auto tb = Totals(b->second, shared, axis);
      pc.pearson = PearsonCorrelation(ta, tb);

      if (report.k > 0) {
        const auto top_a = TopK(ta, report.k);
        const auto top_b = TopK(tb, report.k);
        std::size_t common = 0;
        for (auto idx : top_a) common += top_b.count(idx);
        pc.top_k_overlap = static_cast<double>(common) / static_cast<double>(report.k);
      }
      report.pairs.push_back(std::move(pc));
    }
  }
  return report;
}

std::vector<JudgeScores> ParseJudgeTraces(std::string_view jsonl) {
  std::vector<JudgeScores> out;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    JudgeScores js;
    js.sample_id = json_util::RequireString(j, "sample_id", line);
    js.judge_id = json_util::RequireString(j, "judge_id", line);
    for (const auto& [category, value] : json_util::RequireObject(j, "scores", line).items()) {
      if (!value.is_number()) {
        throw Error(ErrorCode::kParse, json_util::Where(line) + "score for '" +
                                           category + "' is not a number");
      }
      const double v = value.get<double>();
      try {
        CheckScore(v, category);
      } catch (const Error& e) {
        throw Error(e.code(), json_util::Where(line) + e.what());
      }
      js.scores[category] = v;
    }
    out.push_back(std::move(js));
  }
  return out;
}

std::vector<JudgeScores> LoadJudgeTraces(const std::filesystem::path& path) {
  return ParseJudgeTraces(io::ReadFile(path));
}

std::map<std::string, double> ParseErrors(std::string_view jsonl) {
  std::map<std::string, double> out;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    const auto id = json_util::RequireString(j, "sample_id", line);
    // Evaluation records name the field distance_km.
    const char* key = j.contains("distance_error_km") ? "distance_error_km" : "distance_km";
    const double e = json_util::RequireNumber(j, key, line);
    if (!(e >= 0.0)) {
      throw Error(ErrorCode::kValidation,
                  json_util::Where(line) + "distance_error_km must be >= 0");
    }
    if (!out.emplace(id, e).second) {
      throw Error(ErrorCode::kDuplicate,
                  json_util::Where(line) + "duplicate sample '" + id + "'");
    }
  }
  return out;
}

std::map<std::string, double> LoadErrors(const std::filesystem::path& path) {
  return ParseErrors(io::ReadFile(path));
}

std::string AttributionToJson(const CategoryAttribution& a) {
  nlohmann::ordered_json j;
  j["category"] = a.category;
  j["slope_pos"] = a.slope_pos ? nlohmann::ordered_json(*a.slope_pos) : nullptr;
  j["slope_neg"] = a.slope_neg ? nlohmann::ordered_json(*a.slope_neg) : nullptr;
  j["membership"] = MembershipName(a.membership);
  j["support_pos"] = a.support_pos;
  j["support_neg"] = a.support_neg;
  return j.dump();
}

std::vector<CategoryAttribution> ParseAttributions(std::string_view jsonl) {
  std::vector<CategoryAttribution> out;
  for (const auto& line : io::SplitLines(jsonl)) {
    const auto j = json_util::ParseObjectLine(line);
    CategoryAttribution a;
    a.category = json_util::RequireString(j, "category", line);
    auto slope = [&](const char* key) -> std::optional<double> {
      const auto& v = json_util::Require(j, key, line);
      if (v.is_null()) return std::nullopt;
      if (!v.is_number()) {
        throw Error(ErrorCode::kParse, json_util::Where(line) + key + " must be a number or null");
      }
      return v.get<double>();
    };
    a.slope_pos = slope("slope_pos");
    a.slope_neg = slope("slope_neg");
    const auto m = ParseMembership(json_util::RequireString(j, "membership", line));
    if (!m) throw Error(ErrorCode::kParse, json_util::Where(line) + "unknown membership");
    a.membership = *m;
    if ((a.membership == Membership::kPositive && !a.slope_pos) ||
        (a.membership == Membership::kNegative && !a.slope_neg)) {
      throw Error(ErrorCode::kParse,
                  json_util::Where(line) + "membership requires the matching slope");
    }
    a.support_pos = static_cast<std::size_t>(json_util::RequireNumber(j, "support_pos", line));
    a.support_neg = static_cast<std::size_t>(json_util::RequireNumber(j, "support_neg", line));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<CategoryAttribution> LoadAttributions(const std::filesystem::path& path) {
  return ParseAttributions(io::ReadFile(path));
}

std::string ConsistencyToJson(const ConsistencyReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["num_categories"] = report.categories.size();
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"judge_a", p.judge_a},
                     {"judge_b", p.judge_b},
                     {"shared_samples", p.shared_samples},
                     {"mean_cosine", p.mean_cosine},
                     {"pearson", p.pearson},
                     {"top_k_overlap", p.top_k_overlap}});
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2);
}

std::vector<ContributionRecord> BuildContributionRecords(
    std::span<const tags::CategoryFractions> fractions,
    std::span<const JudgeScores> judges,
    const std::map<std::string, double>& errors) {
  std::map<std::string, const tags::CategoryFractions*> by_id;
  for (const auto& f : fractions) {
    if (!by_id.emplace(f.sample_id, &f).second) {
      throw Error(ErrorCode::kDuplicate, "fractions for '" + f.sample_id + "' listed twice");
    }
  }
  std::map<std::string, std::vector<JudgeScores>> judges_by_sample;
  for (const auto& js : judges) judges_by_sample[js.sample_id].push_back(js);

  std::vector<ContributionRecord> out;
  out.reserve(errors.size());
  for (const auto& [sample, error_km] : errors) {
    auto f = by_id.find(sample);
    if (f == by_id.end()) {
      throw Error(ErrorCode::kNotFound, "no fractions for sample '" + sample + "'");
    }
    auto j = judges_by_sample.find(sample);
    if (j == judges_by_sample.end()) {
      throw Error(ErrorCode::kMissingJudges, "no judge scores for sample '" + sample + "'");
    }
    ContributionRecord r;
    r.sample_id = sample;
    r.mean_contribution = AggregateJudges(j->second);
    r.distance_error_km = error_km;
    r.fractions = *f->second;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace agl::loc
