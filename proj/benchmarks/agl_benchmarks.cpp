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

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "agl/audio.hpp"
#include "agl/eval.hpp"
#include "agl/filters.hpp"
#include "agl/geo.hpp"
#include "agl/localizability.hpp"

namespace {

std::vector<agl::geo::GeoPoint> RandomPoints(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<agl::geo::GeoPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts.emplace_back(std::asin(2 * u(rng) - 1) * 180 / std::numbers::pi, 360 * u(rng) - 180);
  }
  return pts;
}

agl::audio::AudioClip Noise(double seconds, std::uint32_t rate = 16000) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.2);
  std::vector<double> x(static_cast<std::size_t>(seconds * rate));
  for (auto& v : x) v = std::clamp(g(rng), -1.0, 1.0);
  return agl::audio::AudioClip(std::move(x), rate);
}

void BM_Haversine(benchmark::State& state) {
  const auto pts = RandomPoints(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(agl::geo::HaversineKm(pts[i % 1024], pts[(i * 7 + 3) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_Haversine);

void BM_Spectrogram(benchmark::State& state) {
  const auto clip = Noise(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(agl::audio::ComputePowerSpectrogram(clip));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(clip.size()));
}
BENCHMARK(BM_Spectrogram)->Arg(1)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_ApplyFilters(benchmark::State& state) {
  const auto clip = Noise(static_cast<double>(state.range(0)));
  const agl::filters::FilterThresholds thr;
  for (auto _ : state) benchmark::DoNotOptimize(agl::filters::ApplyFilters(clip, thr));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(clip.size()));
}
BENCHMARK(BM_ApplyFilters)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Summarize(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<agl::eval::EvalRecord> recs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    auto& r = recs[i];
    r.sample_id = "s" + std::to_string(i);
    r.truth_continent = std::string(agl::geo::kContinents[i % 6]);
    r.rejected = u(rng) < 0.1;
    r.distance_km = r.rejected ? agl::eval::kRejectDistanceKm : 20000 * u(rng);
    r.has_speech = u(rng) < 0.5;
  }
  const std::vector<double> tau(agl::eval::kDefaultTauKm.begin(), agl::eval::kDefaultTauKm.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(agl::eval::Summarize(recs, tau));
    benchmark::DoNotOptimize(agl::eval::BuildConfusion(recs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Summarize)->Arg(1444)->Arg(100000);

void BM_ClassifyCategories(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int categories = 50;
  std::vector<agl::loc::ContributionRecord> recs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    auto& r = recs[i];
    r.sample_id = "s" + std::to_string(i);
    r.fractions.sample_id = r.sample_id;
    r.distance_error_km = 3000 * u(rng);
    for (int c = 0; c < categories; ++c) {
      if (u(rng) < 0.2) {
        const std::string name = "cat" + std::to_string(c);
        r.fractions.fractions[name] = u(rng);
        r.mean_contribution[name] = u(rng);
      }
    }
  }
  const agl::loc::AttributionConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(agl::loc::ClassifyCategories(recs, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassifyCategories)->Arg(1444);

}  // namespace

BENCHMARK_MAIN();
