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

// Human guessing arena backend: per-session clip order, guess scoring, an
// append-only event log, and a leaderboard rebuilt from that log.

#ifndef AGL_SERVICE_HPP_
#define AGL_SERVICE_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "agl/eval.hpp"
#include "agl/numeric.hpp"

namespace agl::service {

struct ClipDescriptor {
  std::string sample_id;
  std::string audio_url;
  double duration_s = 0.0;
};

struct GuessEvent {
  std::string session_id;
  std::string sample_id;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string submitted_at;  // ISO 8601 UTC
  double distance_km = 0.0;
  double geoscore = 0.0;
};

struct GuessResult {
  GuessEvent event;
  geo::GeoPoint truth;
};

struct LeaderboardRow {
  std::string session_id;
  std::size_t guesses = 0;
  double mean_geoscore = 0.0;
  double mean_distance_km = 0.0;
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

std::string FormatUtc(std::chrono::system_clock::time_point t);
std::string EventToJson(const GuessEvent& e);
GuessEvent ParseEventJson(std::string_view line);

class BenchService {
 public:
  // Replays `log_path` if it exists, then appends to it. Throws Error(kParse)
  // on a corrupt record other than a torn final line, and Error(kConflict) /
  // Error(kNotFound) when the log disagrees with the manifest.
  BenchService(std::vector<eval::SampleRecord> samples,
               std::filesystem::path audio_root, std::filesystem::path log_path,
               std::uint64_t seed, Clock clock = std::chrono::system_clock::now);
  ~BenchService();

  BenchService(const BenchService&) = delete;
  BenchService& operator=(const BenchService&) = delete;

  // Next clip this session has not guessed; nullopt once every clip has been
  // guessed. Throws Error(kNoContent) for an empty manifest and
  // Error(kValidation) for an empty session id.
  std::optional<ClipDescriptor> NextClip(std::string_view session_id) const;

  // Scores and logs a guess. Throws Error(kValidation), Error(kNotFound),
  // Error(kConflict).
  GuessResult SubmitGuess(std::string_view session_id,
                          std::string_view sample_id, double latitude,
                          double longitude);

  std::vector<LeaderboardRow> Leaderboard(
      std::optional<std::size_t> limit = std::nullopt) const;

  // Audio file for a sample, confined to the audio root; nullopt when the
  // sample is unknown or the file escapes the root or does not exist.
  std::optional<std::filesystem::path> AudioPath(std::string_view sample_id) const;

  std::size_t num_clips() const { return samples_.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct Aggregate {
    std::size_t guesses = 0;
    CompensatedSum geoscore;
    CompensatedSum distance;
  };

  const eval::SampleRecord* Find(std::string_view sample_id) const;
  std::vector<std::size_t> Order(std::string_view session_id) const;
  void Apply(const GuessEvent& e);
  void Replay();
  void Append(const GuessEvent& e);

  std::vector<eval::SampleRecord> samples_;  // sorted by id, immutable
  std::filesystem::path audio_root_;
  std::filesystem::path log_path_;
  std::uint64_t seed_;
  Clock clock_;
  int log_fd_ = -1;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::set<std::string>, std::less<>> guessed_;
  std::map<std::string, Aggregate, std::less<>> aggregates_;
  std::vector<std::string> warnings_;
};

// HTTP/1.1 front end over a BenchService.
//
//   GET  /v1/health
//   GET  /v1/clips/next?session=ID
//   GET  /v1/audio/{sample_id}        (audio/wav, Range supported)
//   POST /v1/guesses                  {"session_id","sample_id","latitude","longitude"}
//   GET  /v1/leaderboard?limit=N
//
// Anything else is served from `static_dir` when given.
class HttpServer {
 public:
  HttpServer(BenchService& service,
             std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  // Binds without serving; port 0 picks a free port. Returns the bound port.
  // Throws Error(kIo) on failure.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  void Serve();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace agl::service

#endif  // AGL_SERVICE_HPP_
